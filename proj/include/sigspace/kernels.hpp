#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version (used by the
// library) and a plain serial version under kernels::serial that is kept as the
// reference for tests and for the benchmark. Every parallel kernel computes each
// output element independently, so results do not depend on the thread count.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "sigspace/linalg.hpp"

namespace sigspace::kernels {

/// Threads used by the OpenMP kernels (0 restores the runtime default).
void set_num_threads(int n);
int num_threads();

/// D^H z, one entry per atom.
template <class S>
Vec<S> correlate(const Mat<S>& atoms, const Vec<S>& z);

RealVec atom_norms(const RealMat& atoms);
RealVec atom_norms(const Mat<Complex>& atoms);

/// |<d_i, d_j>| / (|d_i| |d_j|) for all j (entry i included). Zero-norm atoms give 0.
template <class S>
RealVec normalized_correlation_row(const Mat<S>& atoms, const RealVec& norms, Index i);

/// Largest normalized off-diagonal correlation; Gram computed block by block.
template <class S>
double max_coherence(const Mat<S>& atoms);

/// For each atom i, the sorted list of j with normalized correlation >= threshold
/// (i itself always included).
template <class S>
std::vector<std::vector<Index>> neighborhoods(const Mat<S>& atoms, double threshold);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<Index>> combinations(Index n, Index k);

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial(Index n, Index k);

/// max over all k-subsets T of f(T). The reduction is a max, so the result is
/// independent of how the subsets are split across threads.
template <class F>
double max_over_supports(Index n, Index k, F&& f) {
  const auto combos = combinations(n, k);
  const auto count = static_cast<std::int64_t>(combos.size());
  double best = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best)
  for (std::int64_t c = 0; c < count; ++c) {
    const double v = f(combos[static_cast<std::size_t>(c)]);
    if (v > best) best = v;
  }
  return best;
}

namespace serial {

template <class S>
Vec<S> correlate(const Mat<S>& atoms, const Vec<S>& z);

template <class S>
RealVec normalized_correlation_row(const Mat<S>& atoms, const RealVec& norms, Index i);

template <class S>
double max_coherence(const Mat<S>& atoms);

template <class S>
std::vector<std::vector<Index>> neighborhoods(const Mat<S>& atoms, double threshold);

template <class F>
double max_over_supports(Index n, Index k, F&& f) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& T : combinations(n, k)) best = std::max(best, f(T));
  return best;
}

}  // namespace serial
}  // namespace sigspace::kernels
