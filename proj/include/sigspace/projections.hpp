#pragma once

// Support-selection schemes: given a signal-space vector z and a target sparsity k,
// pick a set of atoms whose span captures z well. All argmax steps break ties
// toward the lowest atom index.

#include <cstdint>
#include <string>
#include <vector>

#include "sigspace/dictionary.hpp"

namespace sigspace {

enum class SchemeKind { threshold, omp, cosamp_rep, iht_rep, eps_omp, eps_threshold, oracle };

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(const std::string& name);

struct SelectionScheme {
  SchemeKind kind = SchemeKind::threshold;
  /// Correlation slack for the eps_* kinds, in [0, 1).
  double eps = 0.0;
  int cosamp_max_iters = 50;
  /// Relative residual improvement below which representation CoSaMP stops.
  double cosamp_tol = 1e-6;
  int iht_max_iters = 200;
  double iht_step = 1.0;

  bool uses_extension() const {
    return kind == SchemeKind::eps_omp || kind == SchemeKind::eps_threshold;
  }
};

/// Throws InvalidArgument for eps outside [0, 1) or non-positive caps.
void validate(const SelectionScheme& scheme);

struct NearOptimalityEstimate {
  /// Worst residual ratio |z - P_S z|^2 / |z - P_opt z|^2 (estimate of C_k).
  double C_hat = 1.0;
  /// Worst captured-energy ratio |P_S z|^2 / |P_opt z|^2 (estimate of C~_k).
  double Ctilde_hat = 1.0;
  std::int64_t trials = 0;
};

struct RepPursuitResult {
  SupportSet support;
  bool converged = false;
  int iterations = 0;
};

/// Correlation level above which two atoms belong to each other's extension:
/// |<d_i, d_j>| / (|d_i| |d_j|) >= 1 - eps^2, with a 1e-12 allowance so eps = 0
/// still groups exactly collinear atoms.
double extension_threshold(double eps);

/// Indices of the k largest |d_i^H z|.
template <class S>
SupportSet threshold_select(const Dictionary<S>& D, const Vec<S>& z, Index k);

template <class S>
SupportSet omp_select(const Dictionary<S>& D, const Vec<S>& z, Index k);

/// All atoms whose normalized correlation with some atom of T reaches extension_threshold(eps).
template <class S>
SupportSet eps_extend(const Dictionary<S>& D, const SupportSet& T, double eps);

/// max_i |eps_extend({i})|.
template <class S>
Index extension_factor(const Dictionary<S>& D, double eps);

template <class S>
SupportSet eps_omp_select(const Dictionary<S>& D, const Vec<S>& z, Index k, double eps);

template <class S>
SupportSet eps_threshold_select(const Dictionary<S>& D, const Vec<S>& z, Index k, double eps);

/// CoSaMP or IHT run in the representation domain with D as the sensing matrix.
/// On hitting the iteration cap the lowest-residual iterate is returned with
/// converged = false.
template <class S>
RepPursuitResult rep_pursuit_select(const Dictionary<S>& D, const Vec<S>& z, Index k,
                                    SchemeKind method, const SelectionScheme& caps = {});

/// Exhaustive minimizer of |z - P_T z| over |T| = min(k, n). Near-ties within
/// 1e-12 |z|^2 resolve to the lexicographically smallest support.
/// Throws BudgetExceeded unless n <= 24 or k <= 3.
template <class S>
SupportSet oracle_select(const Dictionary<S>& D, const Vec<S>& z, Index k);

bool oracle_feasible(Index n, Index k);

/// A scheme bound to a dictionary. Extension neighborhoods are computed once at
/// construction, so one Selector can serve many selections. The dictionary must
/// outlive the selector.
template <class S>
class Selector {
 public:
  Selector(const Dictionary<S>& D, SelectionScheme scheme);

  SupportSet select(const Vec<S>& z, Index k) const;
  /// Support inflation factor: measured extension factor for eps kinds, else 1.
  Index zeta() const { return zeta_; }
  const SelectionScheme& scheme() const { return scheme_; }
  const Dictionary<S>& dictionary() const { return *dict_; }
  /// Extension neighborhoods (each includes the atom itself); empty for plain kinds.
  const std::vector<std::vector<Index>>& neighbors() const { return neighbors_; }

 private:
  const Dictionary<S>* dict_;
  SelectionScheme scheme_;
  std::vector<std::vector<Index>> neighbors_;
  Index zeta_ = 1;
};

template <class S>
SupportSet select(const Dictionary<S>& D, const SelectionScheme& scheme, const Vec<S>& z, Index k);

/// Test vectors alternate between pure Gaussian draws and planted k-sparse
/// mixtures D_T a + sigma * noise with sigma cycling through {0, 0.1, 1}
/// (noise scaled to |D_T a| / sqrt(d) per entry).
template <class S>
NearOptimalityEstimate estimate_near_optimality(const SelectionScheme& scheme,
                                                const Dictionary<S>& D, Index k,
                                                std::int64_t trials, std::uint64_t seed);

}  // namespace sigspace
