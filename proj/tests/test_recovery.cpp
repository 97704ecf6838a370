#include "doctest.h"

#include "sigspace/experiments.hpp"
#include "sigspace/recovery.hpp"

using namespace sigspace;

namespace {

SSCoSaMPConfig thresholding_config(Index k) {
  SSCoSaMPConfig cfg;
  cfg.k = k;
  return cfg;  // default schemes are plain thresholding
}

}  // namespace

TEST_CASE("unitary noiseless recovery is exact") {
  const auto D = identity_dictionary<Real>(100);
  const auto M = gaussian_measurements<Real>(60, 100, 3);
  const auto sig = gen_sparse_signal(D, 4, SupportMode::separated, 11);
  const RealVec y = M.matrix * sig.x;
  const auto rep = sscosamp<Real>(y, M, D, thresholding_config(4), &sig.x);
  CHECK((rep.estimate - sig.x).norm() < 1e-6);
  CHECK(rep.final_support == sig.support);
  CHECK(rep.stop_reason == StopReason::residual);
  REQUIRE(rep.initial_error.has_value());
  CHECK(*rep.initial_error == doctest::Approx(1.0));
  for (const auto& r : rep.trace) {
    CHECK(r.support_size <= 4);
    CHECK(r.merged_support_size <= 12);
    REQUIRE(r.error_norm.has_value());
  }
}

TEST_CASE("overcomplete DFT recovery with eps-OMP on a clustered signal") {
  const auto D = overcomplete_dft(64, 4);
  const auto M = gaussian_measurements<Complex>(40, 64, 7);
  const auto sig = gen_sparse_signal(D, 3, SupportMode::clustered, 5);
  const Vec<Complex> y = M.matrix * sig.x;
  SSCoSaMPConfig cfg;
  cfg.k = 3;
  cfg.scheme_expand.kind = cfg.scheme_shrink.kind = SchemeKind::eps_omp;
  cfg.scheme_expand.eps = cfg.scheme_shrink.eps = std::sqrt(0.1);
  const auto rep = sscosamp<Complex>(y, M, D, cfg, &sig.x);
  CHECK((rep.estimate - sig.x).norm() < 1e-3);
}

TEST_CASE("iteration cap and stagnation stop the loop") {
  const auto D = identity_dictionary<Real>(30);
  const auto M = gaussian_measurements<Real>(4, 30, 1);  // hopeless
  const auto sig = gen_sparse_signal(D, 6, SupportMode::clustered, 2);
  const RealVec y = M.matrix * sig.x;
  SSCoSaMPConfig cfg = thresholding_config(6);
  cfg.halting.max_iters = 2;
  cfg.halting.stagnation_tol = 0.0;
  auto rep = sscosamp<Real>(y, M, D, cfg);
  CHECK(rep.iterations <= 2);
  cfg.halting.max_iters = 50;
  cfg.halting.stagnation_tol = 1e-6;
  rep = sscosamp<Real>(y, M, D, cfg);
  CHECK(rep.iterations <= 50);
  CHECK(rep.trace.size() == static_cast<std::size_t>(rep.iterations));
}

TEST_CASE("zero measurements return the zero estimate") {
  const auto D = identity_dictionary<Real>(10);
  const auto M = gaussian_measurements<Real>(5, 10, 1);
  const auto rep = sscosamp<Real>(RealVec::Zero(5), M, D, thresholding_config(2));
  CHECK(rep.estimate.norm() == 0.0);
  CHECK(rep.stop_reason == StopReason::residual);
  CHECK(rep.iterations == 1);
}

TEST_CASE("configuration and dimension checks") {
  const auto D = identity_dictionary<Real>(10);
  const auto M = gaussian_measurements<Real>(5, 10, 1);
  SSCoSaMPConfig cfg = thresholding_config(0);
  CHECK_THROWS_AS(sscosamp<Real>(RealVec::Zero(5), M, D, cfg), InvalidArgument);
  cfg.k = 2;
  CHECK_THROWS_AS(sscosamp<Real>(RealVec::Zero(4), M, D, cfg), DimensionError);
  const auto M2 = gaussian_measurements<Real>(5, 9, 1);
  CHECK_THROWS_AS(sscosamp<Real>(RealVec::Zero(5), M2, D, cfg), DimensionError);
  cfg.a = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
}

TEST_CASE("invariant check needs ground truth") {
  const auto D = identity_dictionary<Real>(10);
  const auto M = gaussian_measurements<Real>(8, 10, 1);
  const auto sig = gen_sparse_signal(D, 1, SupportMode::clustered, 3);
  const RealVec y = M.matrix * sig.x;
  const auto no_truth = sscosamp<Real>(y, M, D, thresholding_config(1));
  CHECK_THROWS_AS(iteration_invariant_check(no_truth, 0.5, 1.0, 0.0), InvalidArgument);
  const auto with_truth = sscosamp<Real>(y, M, D, thresholding_config(1), &sig.x);
  // |x^1 - x| <= 1 * |x^0 - x| holds trivially for any non-expanding step
  CHECK(iteration_invariant_check(with_truth, 10.0, 0.0, 0.0));
}

TEST_CASE("report JSON") {
  const auto D = overcomplete_dft(8, 2);
  const auto M = gaussian_measurements<Complex>(6, 8, 1);
  const auto sig = gen_sparse_signal(D, 1, SupportMode::clustered, 3);
  const Vec<Complex> y = M.matrix * sig.x;
  const auto rep = sscosamp<Complex>(y, M, D, thresholding_config(1), &sig.x);
  const auto j = to_json(rep, true);
  CHECK(j["iterations"] == rep.iterations);
  CHECK(j["estimate"].size() == 8);
  CHECK(j["estimate"][0].size() == 2);
  CHECK(j["trace"].size() == rep.trace.size());
  CHECK(j.contains("initial_error"));
  CHECK_FALSE(to_json(rep, false).contains("estimate"));
}
