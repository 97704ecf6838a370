#include "sigspace/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigspace/kernels.hpp"

namespace sigspace::theory {

namespace {

void check_delta(double delta, const char* name) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1), got " + std::to_string(delta));
  }
}

void check_projection_constants(double C_k, double Ctilde, double gamma) {
  if (!(C_k >= 1.0)) throw InvalidArgument("C_k must be at least 1");
  if (!(Ctilde > 0.0 && Ctilde <= 1.0)) throw InvalidArgument("C~_2k must lie in (0, 1]");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
}

void check_budget(Index n, Index k) {
  if (k < 1) throw InvalidArgument("sparsity order must be at least 1");
  if (n > kMaxExhaustiveAtoms) {
    throw BudgetExceeded("exhaustive RIP needs n <= " + std::to_string(kMaxExhaustiveAtoms) +
                         ", got " + std::to_string(n));
  }
}

// max(lambda_max - 1, 1 - lambda_min) for the Hermitian Gram of B.
template <class S>
double isometry_defect(const Mat<S>& B) {
  if (B.cols() == 0) return 0.0;
  const Mat<S> gram = B.adjoint() * B;
  Eigen::SelfAdjointEigenSolver<Mat<S>> eig(gram, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return std::max(ev.maxCoeff() - 1.0, 1.0 - ev.minCoeff());
}

template <class S>
Mat<S> projector(const Mat<S>& atoms, const std::vector<Index>& idx) {
  const Mat<S> U = range_basis<S>(subdict(atoms, SupportSet(atoms.cols(), idx)));
  return U * U.adjoint();
}

}  // namespace

template <class S>
double exact_drip(const Mat<S>& M, const Dictionary<S>& D, Index k) {
  check_budget(D.size(), k);
  if (M.cols() != D.dim()) throw DimensionError("exact_drip: cols(M) != signal dimension");
  const Index order = std::min(k, D.size());
  const double delta = kernels::max_over_supports(D.size(), order, [&](const std::vector<Index>& T) {
    const Mat<S> U = range_basis<S>(subdict(D.matrix(), SupportSet(D.size(), T)));
    return isometry_defect<S>(Mat<S>(M * U));
  });
  return std::max(delta, 0.0);
}

template <class S>
double exact_rip(const Mat<S>& A, Index k) {
  check_budget(A.cols(), k);
  const Index order = std::min(k, A.cols());
  const double delta = kernels::max_over_supports(A.cols(), order, [&](const std::vector<Index>& T) {
    return isometry_defect<S>(subdict(A, SupportSet(A.cols(), T)));
  });
  return std::max(delta, 0.0);
}

double coherence_rip_bound(double mu, Index k) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("coherence must lie in [0, 1]");
  if (k < 1) throw InvalidArgument("k must be at least 1");
  return static_cast<double>(k - 1) * mu;
}

double ck_bound_generic(double C_e, double delta_2k) {
  if (!(C_e >= 0.0)) throw InvalidArgument("C_e must be non-negative");
  check_delta(delta_2k, "delta_2k");
  return 1.0 + C_e * std::sqrt(1.0 + delta_2k);
}

double ck_bound_cosamp_exact(double delta_2k, double delta_3k, double delta_4k) {
  check_delta(delta_2k, "delta_2k");
  check_delta(delta_3k, "delta_3k");
  check_delta(delta_4k, "delta_4k");
  if (delta_2k > delta_3k || delta_3k > delta_4k) {
    throw InvalidArgument("RIP constants must be non-decreasing in the order");
  }
  const double C_e = 2.0 / std::sqrt(1.0 - delta_3k) +
                     4.0 * (1.0 + delta_4k / (1.0 - delta_3k)) / std::sqrt(1.0 - delta_2k);
  return ck_bound_generic(C_e, delta_2k);
}

double ctilde_bound_threshold(double delta_k) {
  check_delta(delta_k, "delta_k");
  return (1.0 - delta_k) / (1.0 + delta_k);
}

bool condition_check(double C_k, double Ctilde_2k, double gamma) {
  check_projection_constants(C_k, Ctilde_2k, gamma);
  const double lead = (1.0 + std::sqrt(C_k)) * (1.0 + std::sqrt(C_k));
  return lead * (1.0 - Ctilde_2k / ((1.0 + gamma) * (1.0 + gamma))) < 1.0;
}

Quadratic convergence_quadratic(double C_k, double Ctilde_2k, double gamma) {
  check_projection_constants(C_k, Ctilde_2k, gamma);
  const double inv_lead = 1.0 / ((1.0 + std::sqrt(C_k)) * (1.0 + std::sqrt(C_k)));
  const double c = std::sqrt(Ctilde_2k) / (1.0 + gamma);
  return Quadratic{inv_lead - (c + 1.0) * (c + 1.0), 2.0 * (c + 1.0) * c,
                   1.0 - inv_lead - c * c};
}

std::optional<double> epsilon_threshold(double C_k, double Ctilde_2k, double gamma) {
  const Quadratic q = convergence_quadratic(C_k, Ctilde_2k, gamma);
  // a < 0 always; c < 0 exactly when condition_check holds, and then both roots
  // are positive with a positive discriminant.
  if (!(q.c < 0.0)) return std::nullopt;
  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  if (disc < 0.0) return std::nullopt;
  // Smaller root, in the cancellation-free form 2c / (-b - sqrt(disc)).
  const double u = 2.0 * q.c / (-q.b - std::sqrt(disc));
  if (!(u > 0.0)) return std::nullopt;
  return u * u;
}

ConvergenceResult convergence_constants(const DeltaTriple& deltas, double C_k, double Ctilde_2k,
                                        double gamma, double zeta) {
  check_delta(deltas.zeta_plus_1, "delta_(zeta+1)k");
  check_delta(deltas.three_zeta, "delta_(3 zeta)k");
  check_delta(deltas.three_zeta_plus_1, "delta_(3 zeta+1)k");
  check_projection_constants(C_k, Ctilde_2k, gamma);
  if (!(zeta >= 1.0)) throw InvalidArgument("zeta must be at least 1");

  const double d1 = deltas.zeta_plus_1;
  const double d3 = deltas.three_zeta;
  const double d4 = deltas.three_zeta_plus_1;
  const double sqrt_c = std::sqrt(C_k);
  const double c = std::sqrt(Ctilde_2k) / (1.0 + gamma);

  const double alpha_den = c * (1.0 - std::sqrt(d1)) - std::sqrt(d4);
  if (!(alpha_den > 0.0)) {
    return ConditionFailure{"alpha denominator sqrt(C~_2k)/(1+gamma)(1-sqrt(delta_(zeta+1)k)) - "
                            "sqrt(delta_(3zeta+1)k) is not positive"};
  }
  TheoryConstants out;
  out.zeta = zeta;
  out.gamma = gamma;
  out.C_k = C_k;
  out.Ctilde_2k = Ctilde_2k;
  out.deltas = deltas;
  out.alpha = std::sqrt(d4) / alpha_den;
  out.eta1 = (1.0 + sqrt_c) * std::sqrt(1.0 + d3) / (1.0 - d4);
  const double eta2_sq = (1.0 + d3) / (gamma * (1.0 + out.alpha)) +
                         (1.0 + d1) * Ctilde_2k / (gamma * (1.0 + out.alpha) * (1.0 + gamma));
  out.eta2 = std::sqrt(eta2_sq);
  out.rho1 = (1.0 + sqrt_c) / std::sqrt(1.0 - d4 * d4);
  const double inner = std::sqrt(d4) - c * (1.0 - std::sqrt(d1));
  out.rho2 = std::sqrt(std::max(0.0, 1.0 - inner * inner));
  out.rho = out.rho1 * out.rho2;
  out.eta = out.eta1 + out.rho1 * out.eta2;
  out.condition = condition_check(C_k, Ctilde_2k, gamma);
  out.epsilon_sq = epsilon_threshold(C_k, Ctilde_2k, gamma);
  return out;
}

ErrorBudget error_budget(double rho, double eta, double x_norm, double e_norm,
                         std::uint64_t max_iters) {
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("error_budget needs 0 <= rho < 1");
  if (!(eta >= 0.0) || !(x_norm >= 0.0) || !(e_norm >= 0.0)) {
    throw InvalidArgument("error_budget: norms and eta must be non-negative");
  }
  ErrorBudget out;
  if (e_norm == 0.0) {
    out.noiseless = true;
    out.t_star = max_iters;
    out.eta0 = (1.0 + 1.0 / (1.0 - rho)) * eta;
    return out;
  }
  if (rho == 0.0 || x_norm <= e_norm) {
    out.t_star = x_norm <= e_norm ? 0 : 1;
  } else {
    const double t = std::ceil(std::log(x_norm / e_norm) / std::log(1.0 / rho));
    out.t_star = static_cast<std::uint64_t>(std::max(0.0, t));
  }
  const double rho_t = std::pow(rho, static_cast<double>(out.t_star));
  out.eta0 = (1.0 + (1.0 - rho_t) / (1.0 - rho)) * eta;
  return out;
}

template <class S>
DripInvariantReport drip_invariant_suite(const Mat<S>& M, const Dictionary<S>& D, Index k) {
  DripInvariantReport report;
  report.delta = exact_drip(M, D, k);
  const Index d = D.dim();
  const Index n = D.size();
  const Index order = std::min(k, n);
  const Mat<S> G = Mat<S>::Identity(d, d) - M.adjoint() * M;

  std::vector<std::vector<std::vector<Index>>> by_size(static_cast<std::size_t>(order + 1));
  std::vector<std::vector<Mat<S>>> proj(static_cast<std::size_t>(order + 1));
  double slack_mp = std::numeric_limits<double>::infinity();
  double slack_pp = std::numeric_limits<double>::infinity();
  for (Index s = 1; s <= order; ++s) {
    by_size[s] = kernels::combinations(n, s);
    auto& ps = proj[s];
    ps.resize(by_size[s].size());
    for (std::size_t c = 0; c < by_size[s].size(); ++c) {
      ps[c] = projector<S>(D.matrix(), by_size[s][c]);
      const double mp = spectral_norm<S>(Mat<S>(M * ps[c]));
      slack_mp = std::min(slack_mp, 1.0 + report.delta - mp * mp);
      slack_pp = std::min(slack_pp, report.delta - spectral_norm<S>(Mat<S>(ps[c] * G * ps[c])));
      ++report.supports_checked;
    }
  }
  double slack_cross = std::numeric_limits<double>::infinity();
  for (Index s1 = 1; s1 < order; ++s1) {
    for (Index s2 = 1; s1 + s2 <= order; ++s2) {
      for (const auto& p1 : proj[s1]) {
        const Mat<S> left = p1 * G;
        for (const auto& p2 : proj[s2]) {
          slack_cross = std::min(slack_cross, report.delta - spectral_norm<S>(Mat<S>(left * p2)));
          ++report.pairs_checked;
        }
      }
    }
  }
  report.slack_mp = slack_mp;
  report.slack_projected = slack_pp;
  report.slack_cross = std::isfinite(slack_cross) ? slack_cross : 0.0;
  return report;
}

nlohmann::json to_json(const TheoryConstants& c) {
  nlohmann::json j{{"zeta", c.zeta},
                   {"gamma", c.gamma},
                   {"C_k", c.C_k},
                   {"Ctilde_2k", c.Ctilde_2k},
                   {"delta_zeta_plus_1", c.deltas.zeta_plus_1},
                   {"delta_3zeta", c.deltas.three_zeta},
                   {"delta_3zeta_plus_1", c.deltas.three_zeta_plus_1},
                   {"alpha", c.alpha},
                   {"rho1", c.rho1},
                   {"rho2", c.rho2},
                   {"eta1", c.eta1},
                   {"eta2", c.eta2},
                   {"rho", c.rho},
                   {"eta", c.eta},
                   {"condition", c.condition}};
  j["epsilon_sq"] = c.epsilon_sq ? nlohmann::json(*c.epsilon_sq) : nlohmann::json(nullptr);
  j["t_star"] = c.t_star ? nlohmann::json(*c.t_star) : nlohmann::json(nullptr);
  j["eta0"] = c.eta0 ? nlohmann::json(*c.eta0) : nlohmann::json(nullptr);
  return j;
}

#define SIGSPACE_INSTANTIATE(S)                                                              \
  template double exact_drip<S>(const Mat<S>&, const Dictionary<S>&, Index);                 \
  template double exact_rip<S>(const Mat<S>&, Index);                                        \
  template DripInvariantReport drip_invariant_suite<S>(const Mat<S>&, const Dictionary<S>&,  \
                                                       Index);

SIGSPACE_INSTANTIATE(Real)
SIGSPACE_INSTANTIATE(Complex)
#undef SIGSPACE_INSTANTIATE

}  // namespace sigspace::theory
