#include "doctest.h"

#include "sigspace/dictionary.hpp"
#include "sigspace/linalg.hpp"
#include "sigspace/rng.hpp"

using namespace sigspace;

TEST_CASE("support set sorts and deduplicates") {
  SupportSet T(10, {7, 2, 7, 0});
  CHECK(T.indices() == std::vector<Index>{0, 2, 7});
  CHECK(T.contains(2));
  CHECK_FALSE(T.contains(3));
  T.insert(3);
  T.insert(3);
  CHECK(T.size() == 4);
  CHECK(T.unite(SupportSet(10, {9, 0})).indices() == std::vector<Index>{0, 2, 3, 7, 9});
  CHECK(SupportSet(10, {2}).is_subset_of(T));
  CHECK_THROWS_AS(SupportSet(5, {5}), InvalidArgument);
  CHECK_THROWS_AS(SupportSet(5, {-1}), InvalidArgument);
}

TEST_CASE("union with a different universe is rejected") {
  CHECK_THROWS_AS(SupportSet(4).unite(SupportSet(5)), InvalidArgument);
}

TEST_CASE("projection onto a rank-deficient support") {
  RealMat A(3, 3);
  A << 1, 2, 0,
       0, 0, 1,
       0, 0, 0;
  // columns 0 and 1 are collinear
  const SupportSet T(3, {0, 1});
  CHECK(range_basis<Real>(subdict(A, T)).cols() == 1);
  RealVec z(3);
  z << 3, 4, 5;
  const RealVec p = project<Real>(A, T, z);
  CHECK(p(0) == doctest::Approx(3));
  CHECK(p(1) == doctest::Approx(0).epsilon(1e-12));
  CHECK(p(2) == doctest::Approx(0).epsilon(1e-12));
  CHECK((p + coproject<Real>(A, T, z) - z).norm() < 1e-14);
}

TEST_CASE("empty support projects to zero") {
  const RealMat A = RealMat::Identity(4, 4);
  RealVec z = RealVec::Ones(4);
  CHECK(project<Real>(A, SupportSet(4), z).norm() == 0.0);
  CHECK(coproject<Real>(A, SupportSet(4), z) == z);
}

TEST_CASE("min-norm solve matches the normal equations on full column rank") {
  const RealMat A = gaussian_matrix<Real>(8, 3, 11, 1.0);
  const RealVec b = gaussian_matrix<Real>(8, 1, 12, 1.0).col(0);
  const RealVec x = min_norm_solve<Real>(A, b);
  const RealVec ref = (A.transpose() * A).ldlt().solve(A.transpose() * b);
  CHECK((x - ref).norm() < 1e-12);
}

TEST_CASE("min-norm solve picks the minimum-norm solution") {
  RealMat A(1, 2);
  A << 1, 1;
  RealVec b(1);
  b << 2;
  const RealVec x = min_norm_solve<Real>(A, b);
  CHECK(x(0) == doctest::Approx(1));
  CHECK(x(1) == doctest::Approx(1));
}

TEST_CASE("projection is idempotent and orthogonal (complex)") {
  const auto D = overcomplete_dft(8, 2);
  const SupportSet T(16, {1, 2, 9});
  const Mat<Complex> z = gaussian_matrix<Complex>(8, 1, 3, 1.0, true);
  const Vec<Complex> p = project<Complex>(D.matrix(), T, Vec<Complex>(z.col(0)));
  CHECK((project<Complex>(D.matrix(), T, p) - p).norm() < 1e-12);
  const Vec<Complex> q = coproject<Complex>(D.matrix(), T, Vec<Complex>(z.col(0)));
  CHECK(std::abs(p.dot(q)) < 1e-12);
}

TEST_CASE("least-squares synthesis recovers an exact representation") {
  const auto D = identity_dictionary<Real>(6);
  const RealMat M = gaussian_matrix<Real>(4, 6, 5, 0.25);
  RealVec x = RealVec::Zero(6);
  x(1) = 2.0;
  x(4) = -1.0;
  const RealVec y = M * x;
  const SupportSet T(6, {1, 4});
  CHECK((ls_synthesize<Real>(M, D.matrix(), T, y) - x).norm() < 1e-12);
  CHECK((ls_synthesize_with_product<Real>(M * D.matrix(), D.matrix(), T, y) - x).norm() < 1e-12);
  CHECK_THROWS_AS(ls_synthesize<Real>(M, D.matrix(), T, RealVec::Zero(3)), DimensionError);
}

TEST_CASE("spectral norm") {
  RealMat A = RealMat::Zero(3, 2);
  A(0, 0) = 3.0;
  A(2, 1) = -5.0;
  CHECK(spectral_norm<Real>(A) == doctest::Approx(5.0));
  CHECK(spectral_norm<Real>(RealMat(0, 0)) == 0.0);
}

TEST_CASE("seeded streams repeat and differ by tag") {
  RandomStream a(derive_seed(42, {1, 2}));
  RandomStream b(derive_seed(42, {1, 2}));
  RandomStream c(derive_seed(42, {2, 1}));
  for (int i = 0; i < 5; ++i) {
    const double va = a.normal();
    CHECK(va == b.normal());
    CHECK(va != c.normal());
  }
  RandomStream u(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(3) < 3);
  }
}

TEST_CASE("normal draws have unit variance") {
  RandomStream r(99);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal();
    s += v;
    s2 += v * v;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}
