#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "sigspace/container_io.hpp"
#include "sigspace/dictionary.hpp"

using namespace sigspace;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sigspace_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("overcomplete DFT atoms are unit norm") {
  const auto D = overcomplete_dft(16, 4);
  CHECK(D.dim() == 16);
  CHECK(D.size() == 64);
  CHECK(D.unit_norm());
  CHECK(D.kind() == DictionaryKind::overcomplete_dft);
  CHECK(D.redundancy() == 4);
  // unitary DFT at redundancy 1
  const auto U = overcomplete_dft(8, 1);
  CHECK((U.matrix().adjoint() * U.matrix() - Mat<Complex>::Identity(8, 8)).norm() < 1e-12);
}

TEST_CASE("overcomplete DFT rejects bad shapes") {
  CHECK_THROWS_AS(overcomplete_dft(1, 4), InvalidArgument);
  CHECK_THROWS_AS(overcomplete_dft(8, 0), InvalidArgument);
}

TEST_CASE("gram profile of the 4x DFT") {
  const auto D = overcomplete_dft(64, 4);
  const RealVec g = gram_profile(D, 0);
  CHECK(g.size() == 255);
  for (Index i = 1; i < g.size(); ++i) CHECK(g(i) <= g(i - 1));
  // Dirichlet kernel at offset 1: sin(pi/4) / (64 sin(pi/256))
  const double expect = std::sin(M_PI / 4) / (64 * std::sin(M_PI / 256));
  CHECK(g(0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(g(1) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("gram profile of a unitary dictionary is all zeros") {
  const auto D = identity_dictionary<Real>(5);
  const RealVec g = gram_profile(D, 2);
  CHECK(g.size() == 4);
  CHECK(g.maxCoeff() == 0.0);
  CHECK(coherence(D) == 0.0);
  const auto Q = random_orthogonal<Real>(12, 3);
  CHECK(gram_profile(Q, 0).maxCoeff() < 1e-12);
}

TEST_CASE("gram profile at d=8, redundancy 2 has 15 sorted entries") {
  const RealVec g = gram_profile(overcomplete_dft(8, 2), 3);
  CHECK(g.size() == 15);
  for (Index i = 1; i < g.size(); ++i) CHECK(g(i) <= g(i - 1));
}

TEST_CASE("coherence of a dictionary with a repeated atom is 1") {
  RealMat A = RealMat::Identity(3, 4);
  A.col(3) = A.col(1);
  CHECK(coherence(Dictionary<Real>(A)) == doctest::Approx(1.0));
}

TEST_CASE("random orthogonal is orthogonal and seeded") {
  const auto Q = random_orthogonal<Real>(10, 5);
  CHECK((Q.matrix().transpose() * Q.matrix() - RealMat::Identity(10, 10)).norm() < 1e-12);
  CHECK(Q.matrix() == random_orthogonal<Real>(10, 5).matrix());
  CHECK(Q.matrix() != random_orthogonal<Real>(10, 6).matrix());
}

TEST_CASE("gaussian measurements: shape, variance, column streams") {
  const auto M = gaussian_measurements<Real>(200, 300, 8);
  CHECK(M.rows() == 200);
  CHECK(M.compressive());
  const double var = M.matrix.squaredNorm() / (200.0 * 300.0);
  CHECK(var == doctest::Approx(1.0 / 200).epsilon(0.02));
  // A column's stream does not depend on the number of columns.
  const RealMat a = gaussian_matrix<Real>(5, 3, 1, 1.0);
  const RealMat b = gaussian_matrix<Real>(5, 7, 1, 1.0);
  CHECK(a == b.leftCols(3));
  // Complex-typed measurements are real unless asked otherwise.
  const auto C = gaussian_measurements<Complex>(4, 6, 2);
  CHECK(C.matrix.imag().norm() == 0.0);
  const auto Cc = gaussian_measurements<Complex>(4, 6, 2, true);
  CHECK(Cc.matrix.imag().norm() > 0.0);
}

TEST_CASE("container round trip, real and complex") {
  const auto D = overcomplete_dft(6, 2);
  const auto path = temp_file("dft.sgsp");
  save_dictionary(path, D);
  const auto h = read_container_header(path);
  CHECK(h.complex);
  CHECK(h.rows == 6);
  CHECK(h.cols == 12);
  CHECK(h.kind == DictionaryKind::overcomplete_dft);
  CHECK(h.redundancy == 2);
  const auto back = load_dictionary<Complex>(path);
  CHECK(back.matrix() == D.matrix());
  CHECK(back.kind() == DictionaryKind::overcomplete_dft);
  CHECK(std::filesystem::file_size(path) == 40 + 6 * 12 * 16);

  const RealMat M = gaussian_matrix<Real>(3, 4, 9, 1.0);
  const auto mpath = temp_file("m.sgsp");
  save_matrix<Real>(mpath, M);
  CHECK(load_matrix<Real>(mpath) == M);
  // real promotes to complex, not the other way round
  CHECK(load_matrix<Complex>(mpath).real() == M);
  CHECK_THROWS_AS(load_matrix<Real>(path), DimensionError);
}

TEST_CASE("container rejects garbage") {
  const auto path = temp_file("bad.sgsp");
  {
    std::ofstream f(path, std::ios::binary);
    f << "NOPE this is not a container";
  }
  CHECK_THROWS_AS(load_matrix<Real>(path), Error);
  // truncated payload
  const auto good = temp_file("trunc.sgsp");
  save_matrix<Real>(good, RealMat::Ones(4, 4));
  std::filesystem::resize_file(good, 40 + 8 * 5);
  CHECK_THROWS_AS(load_matrix<Real>(good), Error);
  CHECK_THROWS_AS(load_matrix<Real>(temp_file("missing.sgsp")), Error);
}
