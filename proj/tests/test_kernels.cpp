#include "doctest.h"

#include "sigspace/dictionary.hpp"
#include "sigspace/kernels.hpp"
#include "sigspace/projections.hpp"

using namespace sigspace;

namespace {

struct ThreadGuard {
  explicit ThreadGuard(int n) : saved(kernels::num_threads()) { kernels::set_num_threads(n); }
  ~ThreadGuard() { kernels::set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("parallel correlate matches the serial reference") {
  ThreadGuard g(4);
  const auto D = overcomplete_dft(128, 4);  // large enough to take the parallel path
  const Mat<Complex> z = gaussian_matrix<Complex>(128, 1, 1, 1.0, true);
  const Vec<Complex> zc = z.col(0);
  const Vec<Complex> par = kernels::correlate(D.matrix(), zc);
  const Vec<Complex> ser = kernels::serial::correlate(D.matrix(), zc);
  CHECK((par - ser).norm() < 1e-12);
  CHECK((par - D.matrix().adjoint() * zc).norm() < 1e-12);
}

TEST_CASE("parallel coherence and neighborhoods match serial") {
  ThreadGuard g(3);
  const auto D = overcomplete_dft(32, 4);
  CHECK(kernels::max_coherence(D.matrix()) == doctest::Approx(kernels::serial::max_coherence(D.matrix())).epsilon(1e-14));
  const double thr = extension_threshold(std::sqrt(0.1));
  CHECK(kernels::neighborhoods(D.matrix(), thr) == kernels::serial::neighborhoods(D.matrix(), thr));
  const RealMat R = gaussian_matrix<Real>(9, 300, 4, 1.0);
  CHECK(kernels::max_coherence(R) == doctest::Approx(kernels::serial::max_coherence(R)).epsilon(1e-14));
}

TEST_CASE("normalized correlation row") {
  const auto D = overcomplete_dft(16, 2);
  const RealVec row = kernels::normalized_correlation_row(D.matrix(), D.norms(), 5);
  CHECK(row(5) == doctest::Approx(1.0));
  CHECK((row - kernels::serial::normalized_correlation_row(D.matrix(), D.norms(), 5)).norm() < 1e-14);
}

TEST_CASE("every atom is its own neighbor") {
  const auto D = identity_dictionary<Real>(6);
  const auto nb = kernels::neighborhoods(D.matrix(), extension_threshold(0.0));
  for (Index i = 0; i < 6; ++i) CHECK(nb[static_cast<std::size_t>(i)] == std::vector<Index>{i});
}

TEST_CASE("4x DFT extension at eps^2 = 0.1 groups the two adjacent atoms") {
  const auto D = overcomplete_dft(64, 4);
  const auto nb = kernels::neighborhoods(D.matrix(), extension_threshold(std::sqrt(0.1)));
  CHECK(nb[0] == std::vector<Index>{0, 1, 255});
  CHECK(nb[10] == std::vector<Index>{9, 10, 11});
}

TEST_CASE("combinations enumerate lexicographically") {
  const auto c = kernels::combinations(4, 2);
  REQUIRE(c.size() == 6);
  CHECK(c.front() == std::vector<Index>{0, 1});
  CHECK(c[1] == std::vector<Index>{0, 2});
  CHECK(c.back() == std::vector<Index>{2, 3});
  CHECK(kernels::binomial(20, 10) == 184756);
  CHECK(kernels::binomial(5, 0) == 1);
  CHECK(kernels::binomial(5, 6) == 0);
  CHECK(kernels::combinations(3, 0).size() == 1);
}

TEST_CASE("max over supports agrees with serial") {
  ThreadGuard g(4);
  auto f = [](const std::vector<Index>& T) {
    double s = 0.0;
    for (Index i : T) s += std::sin(static_cast<double>(i * i + 1));
    return s;
  };
  CHECK(kernels::max_over_supports(12, 3, f) == kernels::serial::max_over_supports(12, 3, f));
}

TEST_CASE("thread count zero means automatic") {
  ThreadGuard g(0);
  CHECK(kernels::num_threads() >= 1);
  kernels::set_num_threads(2);
  CHECK(kernels::num_threads() == 2);
}
