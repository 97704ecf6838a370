#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sigspace/projections.hpp"

namespace sigspace {

struct HaltingRule {
  int max_iters = 50;
  /// Stop once |y_r| <= residual_tol * |y|.
  double residual_tol = 1e-6;
  /// Stop when the residual improved by less than this fraction over `stagnation_window` iterations.
  double stagnation_tol = 1e-6;
  int stagnation_window = 3;
};

struct SSCoSaMPConfig {
  Index k = 1;
  /// Expansion factor: the expand scheme is asked for a*k atoms.
  Index a = 2;
  /// Prunes the least-squares estimate back to k (zeta*k) atoms.
  SelectionScheme scheme_shrink;
  /// Proposes new atoms from M^H y_r.
  SelectionScheme scheme_expand;
  HaltingRule halting;
};

void validate(const SSCoSaMPConfig& cfg);

enum class StopReason { residual, stagnation, max_iters };
std::string to_string(StopReason reason);

struct IterationRecord {
  int iteration = 0;
  Index merged_support_size = 0;  ///< |T~^t|
  Index support_size = 0;         ///< |T^t|
  double residual_norm = 0.0;     ///< |y - M x^t|
  std::optional<double> error_norm;  ///< |x^t - x| when the truth is known
};

template <class S>
struct RecoveryReport {
  Vec<S> estimate;
  SupportSet final_support;
  int iterations = 0;
  StopReason stop_reason = StopReason::max_iters;
  std::vector<IterationRecord> trace;
  /// |x - x^0| = |x|, recorded with the truth.
  std::optional<double> initial_error;
};

/// Signal Space CoSaMP: x^0 = 0, T^0 = {}; each iteration expands the support with
/// scheme_expand(M^H y_r, a k), fits by least squares over the merged support,
/// shrinks with scheme_shrink(x_p, k), re-projects and updates the residual.
/// `truth`, when given, adds signal-space errors to the trace.
template <class S>
RecoveryReport<S> sscosamp(const Vec<S>& y, const MeasurementModel<S>& M, const Dictionary<S>& D,
                           const SSCoSaMPConfig& cfg, const Vec<S>* truth = nullptr);

/// Same, reusing prebuilt selectors (both must be bound to D) and a precomputed M*D.
template <class S>
RecoveryReport<S> sscosamp(const Vec<S>& y, const MeasurementModel<S>& M, const Mat<S>& MD,
                           const Selector<S>& expand, const Selector<S>& shrink,
                           const SSCoSaMPConfig& cfg, const Vec<S>* truth = nullptr);

/// |x^t - x| <= rho |x^{t-1} - x| + eta |e| + 1e-9 for every recorded iteration.
/// Throws InvalidArgument when the trace carries no ground truth.
template <class S>
bool iteration_invariant_check(const RecoveryReport<S>& report, double rho, double eta,
                               double e_norm);

template <class S>
nlohmann::json to_json(const RecoveryReport<S>& report, bool include_estimate);

}  // namespace sigspace
