#include "sigspace/recovery.hpp"

#include <cmath>

namespace sigspace {

void validate(const SSCoSaMPConfig& cfg) {
  if (cfg.k < 1) throw InvalidArgument("sscosamp: k must be at least 1");
  if (cfg.a < 1) throw InvalidArgument("sscosamp: expansion factor a must be at least 1");
  if (cfg.halting.max_iters < 1) throw InvalidArgument("sscosamp: max_iters must be at least 1");
  if (cfg.halting.stagnation_window < 1) {
    throw InvalidArgument("sscosamp: stagnation_window must be at least 1");
  }
  validate(cfg.scheme_shrink);
  validate(cfg.scheme_expand);
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::residual: return "residual";
    case StopReason::stagnation: return "stagnation";
    case StopReason::max_iters: return "max_iters";
  }
  return "max_iters";
}

template <class S>
RecoveryReport<S> sscosamp(const Vec<S>& y, const MeasurementModel<S>& M, const Mat<S>& MD,
                           const Selector<S>& expand, const Selector<S>& shrink,
                           const SSCoSaMPConfig& cfg, const Vec<S>* truth) {
  validate(cfg);
  const Dictionary<S>& D = shrink.dictionary();
  if (&expand.dictionary() != &D) throw InvalidArgument("sscosamp: selectors bound to different dictionaries");
  if (M.cols() != D.dim()) throw DimensionError("sscosamp: cols(M) != signal dimension");
  if (M.rows() != y.size()) throw DimensionError("sscosamp: rows(M) != size(y)");
  if (MD.rows() != M.rows() || MD.cols() != D.size()) throw DimensionError("sscosamp: bad M*D");
  if (truth && truth->size() != D.dim()) throw DimensionError("sscosamp: truth has wrong length");
  const Index expand_k = std::min(cfg.a * cfg.k, D.size());
  const Index shrink_k = std::min(cfg.k, D.size());

  RecoveryReport<S> report;
  report.estimate = Vec<S>::Zero(D.dim());
  report.final_support = SupportSet(D.size());
  if (truth) report.initial_error = truth->norm();

  const double ynorm = y.norm();
  std::vector<double> residuals{ynorm};
  Vec<S> yr = y;
  SupportSet T(D.size());
  for (int t = 1; t <= cfg.halting.max_iters; ++t) {
    const Vec<S> proxy = M.matrix.adjoint() * yr;
    const SupportSet merged = T.unite(expand.select(proxy, expand_k));
    const Vec<S> xp = ls_synthesize_with_product<S>(MD, D.matrix(), merged, y);
    T = shrink.select(xp, shrink_k);
    report.estimate = project<S>(D.matrix(), T, xp);
    yr = y - M.matrix * report.estimate;
    const double res = yr.norm();
    residuals.push_back(res);

    IterationRecord rec;
    rec.iteration = t;
    rec.merged_support_size = merged.size();
    rec.support_size = T.size();
    rec.residual_norm = res;
    if (truth) rec.error_norm = (report.estimate - *truth).norm();
    report.trace.push_back(rec);
    report.iterations = t;
    report.final_support = T;

    if (res <= cfg.halting.residual_tol * ynorm) {
      report.stop_reason = StopReason::residual;
      return report;
    }
    const auto w = static_cast<std::size_t>(cfg.halting.stagnation_window);
    if (residuals.size() > w) {
      const double before = residuals[residuals.size() - 1 - w];
      if (before - res < cfg.halting.stagnation_tol * before) {
        report.stop_reason = StopReason::stagnation;
        return report;
      }
    }
  }
  report.stop_reason = StopReason::max_iters;
  return report;
}

template <class S>
RecoveryReport<S> sscosamp(const Vec<S>& y, const MeasurementModel<S>& M, const Dictionary<S>& D,
                           const SSCoSaMPConfig& cfg, const Vec<S>* truth) {
  validate(cfg);
  if (M.cols() != D.dim()) throw DimensionError("sscosamp: cols(M) != signal dimension");
  const Selector<S> expand(D, cfg.scheme_expand);
  const Selector<S> shrink(D, cfg.scheme_shrink);
  const Mat<S> MD = M.matrix * D.matrix();
  return sscosamp<S>(y, M, MD, expand, shrink, cfg, truth);
}

template <class S>
bool iteration_invariant_check(const RecoveryReport<S>& report, double rho, double eta,
                               double e_norm) {
  if (!report.initial_error) throw InvalidArgument("iteration_invariant_check: no ground truth");
  double prev = *report.initial_error;
  for (const auto& rec : report.trace) {
    if (!rec.error_norm) throw InvalidArgument("iteration_invariant_check: no ground truth");
    if (*rec.error_norm > rho * prev + eta * e_norm + 1e-9) return false;
    prev = *rec.error_norm;
  }
  return true;
}

namespace {

template <class S>
nlohmann::json scalar_json(const S& v) {
  if constexpr (is_complex_v<S>) return nlohmann::json::array({v.real(), v.imag()});
  else return v;
}

}  // namespace

template <class S>
nlohmann::json to_json(const RecoveryReport<S>& report, bool include_estimate) {
  nlohmann::json j;
  j["iterations"] = report.iterations;
  j["stop_reason"] = to_string(report.stop_reason);
  j["final_support"] = report.final_support.indices();
  j["universe"] = report.final_support.universe();
  if (report.initial_error) j["initial_error"] = *report.initial_error;
  auto trace = nlohmann::json::array();
  for (const auto& rec : report.trace) {
    nlohmann::json r{{"iteration", rec.iteration},
                     {"merged_support_size", rec.merged_support_size},
                     {"support_size", rec.support_size},
                     {"residual_norm", rec.residual_norm}};
    if (rec.error_norm) r["error_norm"] = *rec.error_norm;
    trace.push_back(std::move(r));
  }
  j["trace"] = std::move(trace);
  if (include_estimate) {
    auto est = nlohmann::json::array();
    for (Index i = 0; i < report.estimate.size(); ++i) est.push_back(scalar_json(report.estimate(i)));
    j["estimate"] = std::move(est);
  }
  return j;
}

#define SIGSPACE_INSTANTIATE(S)                                                                  \
  template RecoveryReport<S> sscosamp<S>(const Vec<S>&, const MeasurementModel<S>&,               \
                                         const Dictionary<S>&, const SSCoSaMPConfig&,             \
                                         const Vec<S>*);                                          \
  template RecoveryReport<S> sscosamp<S>(const Vec<S>&, const MeasurementModel<S>&,               \
                                         const Mat<S>&, const Selector<S>&, const Selector<S>&,   \
                                         const SSCoSaMPConfig&, const Vec<S>*);                   \
  template bool iteration_invariant_check<S>(const RecoveryReport<S>&, double, double, double);  \
  template nlohmann::json to_json<S>(const RecoveryReport<S>&, bool);

SIGSPACE_INSTANTIATE(Real)
SIGSPACE_INSTANTIATE(Complex)
#undef SIGSPACE_INSTANTIATE

}  // namespace sigspace
