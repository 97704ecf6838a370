#pragma once

// Closed-form bounds of the SSCoSaMP analysis, plus exhaustive RIP / D-RIP
// oracles that certify the hypotheses on tiny instances.

#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "sigspace/dictionary.hpp"

namespace sigspace::theory {

/// Enumeration guard shared by the exhaustive oracles.
inline constexpr Index kMaxExhaustiveAtoms = 20;

/// Smallest delta with (1-delta)|D a|^2 <= |M D a|^2 <= (1+delta)|D a|^2 for every
/// k-sparse a. Per support, the extreme Rayleigh quotients are taken on an
/// orthonormal basis of range(D_T), which handles rank-deficient D_T.
template <class S>
double exact_drip(const Mat<S>& M, const Dictionary<S>& D, Index k);

/// exact_drip with D = I: extreme eigenvalues of A_T^H A_T over all k-column subsets.
template <class S>
double exact_rip(const Mat<S>& A, Index k);

/// delta_k <= (k - 1) mu.
double coherence_rip_bound(double mu, Index k);

/// C_k <= 1 + C_e sqrt(1 + delta_2k).
double ck_bound_generic(double C_e, double delta_2k);

/// C_k bound for representation CoSaMP in terms of delta_2k <= delta_3k <= delta_4k.
double ck_bound_cosamp_exact(double delta_2k, double delta_3k, double delta_4k);

/// C~_k >= (1 - delta_k) / (1 + delta_k) for thresholding on a RIP dictionary.
double ctilde_bound_threshold(double delta_k);

/// (1 + sqrt(C_k))^2 (1 - C~_2k / (1 + gamma)^2) < 1.
bool condition_check(double C_k, double Ctilde_2k, double gamma);

/// A u^2 + B u + C in u = sqrt(delta); recovery converges while it stays negative.
struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double operator()(double u) const { return (a * u + b) * u + c; }
};

Quadratic convergence_quadratic(double C_k, double Ctilde_2k, double gamma);

/// eps^2 = u^2 for the smallest positive root u; empty when the condition fails.
std::optional<double> epsilon_threshold(double C_k, double Ctilde_2k, double gamma);

struct DeltaTriple {
  double zeta_plus_1 = 0.0;        ///< delta_{(zeta+1)k}
  double three_zeta = 0.0;         ///< delta_{3 zeta k}
  double three_zeta_plus_1 = 0.0;  ///< delta_{(3 zeta+1)k}
};

struct TheoryConstants {
  double zeta = 1.0;
  double gamma = 0.01;
  double C_k = 1.0;
  double Ctilde_2k = 1.0;
  DeltaTriple deltas;
  double alpha = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  bool condition = false;
  std::optional<double> epsilon_sq;
  std::optional<std::uint64_t> t_star;
  std::optional<double> eta0;
};

/// Returned instead of constants when alpha's denominator is not positive.
struct ConditionFailure {
  std::string reason;
};

using ConvergenceResult = std::variant<TheoryConstants, ConditionFailure>;

/// Evaluates alpha, eta_1, eta_2, rho_1, rho_2 and rho = rho_1 rho_2,
/// eta = eta_1 + rho_1 eta_2, with gamma_1 = gamma_2 = gamma.
ConvergenceResult convergence_constants(const DeltaTriple& deltas, double C_k, double Ctilde_2k,
                                        double gamma, double zeta = 1.0);

struct ErrorBudget {
  std::uint64_t t_star = 0;
  double eta0 = 0.0;
  /// e_norm == 0: t_star is the iteration cap and eta0 the t -> infinity limit.
  bool noiseless = false;
};

ErrorBudget error_budget(double rho, double eta, double x_norm, double e_norm,
                         std::uint64_t max_iters = 50);

struct DripInvariantReport {
  double delta = 0.0;
  /// Minimum over supports of (1 + delta) - |M P_T|^2.
  double slack_mp = 0.0;
  /// Minimum over supports of delta - |P_T (I - M^H M) P_T|.
  double slack_projected = 0.0;
  /// Minimum over pairs |T1| + |T2| <= k of delta - |P_T1 (I - M^H M) P_T2|.
  double slack_cross = 0.0;
  std::uint64_t supports_checked = 0;
  std::uint64_t pairs_checked = 0;

  double min_slack() const { return std::min({slack_mp, slack_projected, slack_cross}); }
  bool passed(double tol = 1e-9) const { return min_slack() >= -tol; }
};

template <class S>
DripInvariantReport drip_invariant_suite(const Mat<S>& M, const Dictionary<S>& D, Index k);

nlohmann::json to_json(const TheoryConstants& c);

}  // namespace sigspace::theory
