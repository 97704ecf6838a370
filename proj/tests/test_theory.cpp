#include "doctest.h"

#include "sigspace/theory.hpp"

using namespace sigspace;
using namespace sigspace::theory;

// Reference values come from tests/oracles/derive_constants.py (mpmath, 40 digits).

TEST_CASE("exact RIP of a scaled orthonormal matrix") {
  const auto Q = random_orthogonal<Real>(8, 1);
  const RealMat M = std::sqrt(1.2) * Q.matrix();
  CHECK(exact_rip<Real>(M, 3) == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(exact_rip<Real>(Q.matrix(), 3) < 1e-12);
  const auto I = identity_dictionary<Real>(8);
  CHECK(exact_drip<Real>(M, I, 2) == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("duplicated column collapses RIP") {
  RealMat A = gaussian_matrix<Real>(6, 5, 2, 1.0 / 6);
  A.col(4) = A.col(1);
  CHECK(exact_rip<Real>(A, 2) >= 1.0);
}

TEST_CASE("D-RIP with D = I equals RIP") {
  const RealMat M = gaussian_matrix<Real>(10, 12, 5, 0.1);
  const auto I = identity_dictionary<Real>(12);
  CHECK(exact_drip<Real>(M, I, 2) == doctest::Approx(exact_rip<Real>(M, 2)).epsilon(1e-10));
}

TEST_CASE("D-RIP handles rank-deficient supports") {
  RealMat A = RealMat::Identity(4, 5);
  A.col(4) = A.col(0);
  const Dictionary<Real> D(A);
  const RealMat M = RealMat::Identity(4, 4);
  CHECK(exact_drip<Real>(M, D, 2) < 1e-12);
}

TEST_CASE("exhaustive oracles enforce the enumeration guard") {
  const RealMat M = RealMat::Identity(4, 21);
  CHECK_THROWS_AS(exact_rip<Real>(M, 2), BudgetExceeded);
  CHECK_THROWS_AS(exact_rip<Real>(RealMat::Identity(4, 4), 0), InvalidArgument);
}

TEST_CASE("coherence bound") {
  CHECK(coherence_rip_bound(0.3, 1) == 0.0);
  CHECK(coherence_rip_bound(0.027 / 31, 8) == doctest::Approx(0.027 * 7 / 31));
  CHECK(coherence_rip_bound(0.01, 5) == doctest::Approx(0.04));
  CHECK_THROWS_AS(coherence_rip_bound(1.5, 2), InvalidArgument);
}

TEST_CASE("coherence bounds the exact RIP on random instances") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    RealMat A = gaussian_matrix<Real>(8, 12, s, 1.0);
    A.colwise().normalize();
    const double mu = coherence(Dictionary<Real>(A));
    CHECK(exact_rip<Real>(A, 3) <= coherence_rip_bound(mu, 3) + 1e-12);
  }
}

TEST_CASE("C_k bounds") {
  CHECK(ck_bound_generic(5.6686, 0.1) == doctest::Approx(6.945277837).epsilon(1e-9));
  CHECK(ck_bound_generic(3.3562, 1 / std::sqrt(32.0)) == doctest::Approx(4.64078357).epsilon(1e-9));
  CHECK(ck_bound_generic(0.0, 0.5) == 1.0);
  CHECK(ck_bound_cosamp_exact(0, 0, 0) == doctest::Approx(7.0));
  CHECK(ck_bound_cosamp_exact(0.027, 0.027, 0.027) == doctest::Approx(7.27828268476).epsilon(1e-10));
  CHECK(ck_bound_cosamp_exact(0.03, 0.03, 0.03) == doctest::Approx(7.31026293794).epsilon(1e-10));
  CHECK_THROWS_AS(ck_bound_cosamp_exact(0.1, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ck_bound_cosamp_exact(0.2, 0.1, 0.3), InvalidArgument);
  CHECK_THROWS_AS(ck_bound_generic(1.0, -0.1), InvalidArgument);
}

TEST_CASE("C~ bound for thresholding") {
  CHECK(ctilde_bound_threshold(0.0) == 1.0);
  CHECK(ctilde_bound_threshold(0.027) == doctest::Approx(0.947419668939).epsilon(1e-11));
}

TEST_CASE("condition check") {
  CHECK(condition_check(1, 1, 1e-9));
  CHECK(condition_check(7.278, 0.94742, 0.01));
  CHECK_FALSE(condition_check(7.310, 0.97 / 1.03, 0.01));
  CHECK_THROWS_AS(condition_check(0.5, 1, 0.01), InvalidArgument);
  CHECK_THROWS_AS(condition_check(1, 0, 0.01), InvalidArgument);
  CHECK_THROWS_AS(condition_check(1, 1, 0), InvalidArgument);
}

TEST_CASE("epsilon threshold") {
  const auto e = epsilon_threshold(1, 1, 0.01);
  REQUIRE(e.has_value());
  CHECK(*e == doctest::Approx(0.00385220590305).epsilon(1e-10));
  CHECK(epsilon_threshold(1, 1, 1e-6).value() == doctest::Approx(0.00444438281506).epsilon(1e-9));
  CHECK_FALSE(epsilon_threshold(7.310, 0.97 / 1.03, 0.01).has_value());
  const auto r = epsilon_threshold(6.9453, 0.95, 0.01);
  REQUIRE(r.has_value());
  const Quadratic q = convergence_quadratic(6.9453, 0.95, 0.01);
  CHECK(std::abs(q(std::sqrt(*r))) <= 1e-9);
}

TEST_CASE("convergence constants") {
  const auto res = convergence_constants({0.001, 0.001, 0.001}, 1, 1, 0.01);
  REQUIRE(std::holds_alternative<TheoryConstants>(res));
  const auto& c = std::get<TheoryConstants>(res);
  CHECK(c.alpha == doctest::Approx(0.0341068996529887).epsilon(1e-12));
  CHECK(c.rho == doctest::Approx(0.749299199095538).epsilon(1e-12));
  CHECK(c.eta == doctest::Approx(29.7618786630634).epsilon(1e-12));
  CHECK(c.rho1 >= 2.0 * (1 - 1e-9));
  CHECK(c.condition);
  CHECK(c.epsilon_sq.has_value());

  // ideal limit: perfect contraction
  const auto ideal = std::get<TheoryConstants>(convergence_constants({0, 0, 0}, 1, 1, 1e-12));
  CHECK(ideal.rho < 1e-5);

  // alpha denominator not positive
  const auto bad = convergence_constants({0.5, 0.5, 0.5}, 1, 1, 0.01);
  CHECK(std::holds_alternative<ConditionFailure>(bad));
  CHECK_THROWS_AS(convergence_constants({1.0, 0, 0}, 1, 1, 0.01), InvalidArgument);
}

TEST_CASE("error budget") {
  auto b = error_budget(0.5, 1.0, 1024.0, 1.0);
  CHECK(b.t_star == 10);
  b = error_budget(0.9, 3.0, 1e30, 1.0);
  CHECK(b.eta0 == doctest::Approx(33.0).epsilon(0.5 / 33));
  b = error_budget(1e-12, 2.0, 10.0, 1.0);
  CHECK(b.eta0 == doctest::Approx(4.0).epsilon(1e-9));
  b = error_budget(0.749299199095538, 29.7618786630634, 1.0, 1e-6);
  CHECK(b.t_star == 48);
  CHECK(b.eta0 == doctest::Approx(148.476497469397).epsilon(1e-10));
  b = error_budget(0.5, 2.0, 1.0, 0.0, 77);
  CHECK(b.noiseless);
  CHECK(b.t_star == 77);
  CHECK(b.eta0 == doctest::Approx(6.0));
  CHECK_THROWS_AS(error_budget(1.0, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("D-RIP invariant suite") {
  SUBCASE("orthonormal M") {
    const auto Q = random_orthogonal<Real>(6, 2);
    const auto D = identity_dictionary<Real>(6);
    const auto r = drip_invariant_suite<Real>(Q.matrix(), D, 2);
    CHECK(r.delta < 1e-12);
    CHECK(r.slack_projected > -1e-12);
    CHECK(r.passed());
  }
  SUBCASE("random 8x10, then scaled") {
    const RealMat M = gaussian_matrix<Real>(8, 10, 3, 1.0 / 8);
    const auto D = identity_dictionary<Real>(10);
    const auto r = drip_invariant_suite<Real>(M, D, 2);
    CHECK(r.passed());
    CHECK(r.supports_checked == 10 + 45);
    CHECK(r.pairs_checked == 100);
    const auto s = drip_invariant_suite<Real>(RealMat(1.1 * M), D, 2);
    CHECK(s.passed());
    CHECK(s.delta != doctest::Approx(r.delta));
  }
}

TEST_CASE("theory constants JSON") {
  const auto c = std::get<TheoryConstants>(convergence_constants({0.001, 0.001, 0.001}, 1, 1, 0.01));
  const auto j = to_json(c);
  CHECK(j["rho"].get<double>() == c.rho);
  CHECK(j["condition"] == true);
  CHECK(j["t_star"].is_null());
}
