#include "sigspace/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace sigspace::kernels {

namespace {

// Below this many scalar multiply-adds a parallel region costs more than it saves.
constexpr Index kParallelWork = 1 << 15;

template <class S>
double conj_abs(const S& a) {
  return std::abs(a);
}

}  // namespace

void set_num_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
  else omp_set_num_threads(omp_get_num_procs());
}

int num_threads() { return omp_get_max_threads(); }

template <class S>
Vec<S> correlate(const Mat<S>& atoms, const Vec<S>& z) {
  if (atoms.rows() != z.size()) throw DimensionError("correlate: vector length != rows(D)");
  const Index n = atoms.cols();
  Vec<S> out(n);
#pragma omp parallel for schedule(static) if (atoms.size() >= kParallelWork)
  for (Index j = 0; j < n; ++j) out(j) = atoms.col(j).dot(z);
  return out;
}

RealVec atom_norms(const RealMat& atoms) { return atoms.colwise().norm().transpose(); }
RealVec atom_norms(const Mat<Complex>& atoms) { return atoms.colwise().norm().transpose(); }

template <class S>
RealVec normalized_correlation_row(const Mat<S>& atoms, const RealVec& norms, Index i) {
  if (i < 0 || i >= atoms.cols()) throw InvalidArgument("atom index out of range");
  const Index n = atoms.cols();
  RealVec out(n);
  const double ni = norms(i);
#pragma omp parallel for schedule(static) if (atoms.size() >= kParallelWork)
  for (Index j = 0; j < n; ++j) {
    const double denom = ni * norms(j);
    out(j) = denom > 0.0 ? std::abs(atoms.col(i).dot(atoms.col(j))) / denom : 0.0;
  }
  return out;
}

template <class S>
double max_coherence(const Mat<S>& atoms) {
  const Index n = atoms.cols();
  if (n < 2) throw InvalidArgument("coherence needs at least two atoms");
  const RealVec norms = atom_norms(atoms);
  Mat<S> unit = atoms;
  for (Index j = 0; j < n; ++j) {
    if (norms(j) > 0.0) unit.col(j) /= norms(j);
  }
  constexpr Index block = 128;
  const Index blocks = (n + block - 1) / block;
  double best = 0.0;
#pragma omp parallel for schedule(dynamic, 1) reduction(max : best)
  for (Index b = 0; b < blocks; ++b) {
    const Index start = b * block;
    const Index width = std::min(block, n - start);
    // Upper triangle only: rows [0, start + width) against this column block.
    const Index rows = start + width;
    const Mat<S> gram = unit.leftCols(rows).adjoint() * unit.middleCols(start, width);
    for (Index c = 0; c < width; ++c) {
      const Index j = start + c;
      for (Index r = 0; r < j; ++r) best = std::max(best, std::abs(gram(r, c)));
    }
  }
  return std::min(best, 1.0);
}

template <class S>
std::vector<std::vector<Index>> neighborhoods(const Mat<S>& atoms, double threshold) {
  const Index n = atoms.cols();
  const RealVec norms = atom_norms(atoms);
  Mat<S> unit = atoms;
  for (Index j = 0; j < n; ++j) {
    if (norms(j) > 0.0) unit.col(j) /= norms(j);
  }
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  constexpr Index block = 128;
  const Index blocks = (n + block - 1) / block;
#pragma omp parallel for schedule(dynamic, 1)
  for (Index b = 0; b < blocks; ++b) {
    const Index start = b * block;
    const Index width = std::min(block, n - start);
    const Mat<S> gram = unit.adjoint() * unit.middleCols(start, width);
    for (Index c = 0; c < width; ++c) {
      const Index i = start + c;
      auto& list = out[static_cast<std::size_t>(i)];
      for (Index j = 0; j < n; ++j) {
        const bool live = norms(i) > 0.0 && norms(j) > 0.0;
        if (j == i || (live && std::abs(gram(j, c)) >= threshold)) list.push_back(j);
      }
    }
  }
  return out;
}

std::uint64_t binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (Index i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (result > UINT64_MAX / num) return UINT64_MAX;
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<std::vector<Index>> combinations(Index n, Index k) {
  std::vector<std::vector<Index>> out;
  if (k < 0 || k > n) return out;
  out.reserve(static_cast<std::size_t>(binomial(n, k)));
  std::vector<Index> cur(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    Index pos = k - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++cur[static_cast<std::size_t>(pos)];
    for (Index q = pos + 1; q < k; ++q) {
      cur[static_cast<std::size_t>(q)] = cur[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
  return out;
}

namespace serial {

template <class S>
Vec<S> correlate(const Mat<S>& atoms, const Vec<S>& z) {
  if (atoms.rows() != z.size()) throw DimensionError("correlate: vector length != rows(D)");
  Vec<S> out = Vec<S>::Zero(atoms.cols());
  for (Index j = 0; j < atoms.cols(); ++j) {
    S acc{};
    for (Index t = 0; t < atoms.rows(); ++t) {
      if constexpr (is_complex_v<S>) acc += std::conj(atoms(t, j)) * z(t);
      else acc += atoms(t, j) * z(t);
    }
    out(j) = acc;
  }
  return out;
}

template <class S>
RealVec normalized_correlation_row(const Mat<S>& atoms, const RealVec& norms, Index i) {
  if (i < 0 || i >= atoms.cols()) throw InvalidArgument("atom index out of range");
  const Vec<S> col = atoms.col(i);
  const Vec<S> raw = correlate<S>(atoms, col);
  RealVec out(atoms.cols());
  for (Index j = 0; j < atoms.cols(); ++j) {
    const double denom = norms(i) * norms(j);
    out(j) = denom > 0.0 ? conj_abs(raw(j)) / denom : 0.0;
  }
  return out;
}

template <class S>
double max_coherence(const Mat<S>& atoms) {
  const Index n = atoms.cols();
  if (n < 2) throw InvalidArgument("coherence needs at least two atoms");
  const RealVec norms = atom_norms(atoms);
  double best = 0.0;
  for (Index i = 0; i < n; ++i) {
    const RealVec row = normalized_correlation_row<S>(atoms, norms, i);
    for (Index j = i + 1; j < n; ++j) best = std::max(best, row(j));
  }
  return std::min(best, 1.0);
}

template <class S>
std::vector<std::vector<Index>> neighborhoods(const Mat<S>& atoms, double threshold) {
  const RealVec norms = atom_norms(atoms);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(atoms.cols()));
  for (Index i = 0; i < atoms.cols(); ++i) {
    const RealVec row = normalized_correlation_row<S>(atoms, norms, i);
    for (Index j = 0; j < atoms.cols(); ++j) {
      if (j == i || row(j) >= threshold) out[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  return out;
}

}  // namespace serial

#define SIGSPACE_INSTANTIATE(S)                                                              \
  template Vec<S> correlate<S>(const Mat<S>&, const Vec<S>&);                                \
  template RealVec normalized_correlation_row<S>(const Mat<S>&, const RealVec&, Index);      \
  template double max_coherence<S>(const Mat<S>&);                                           \
  template std::vector<std::vector<Index>> neighborhoods<S>(const Mat<S>&, double);          \
  template std::vector<std::vector<Index>> serial::neighborhoods<S>(const Mat<S>&, double);  \
  template Vec<S> serial::correlate<S>(const Mat<S>&, const Vec<S>&);                        \
  template RealVec serial::normalized_correlation_row<S>(const Mat<S>&, const RealVec&,      \
                                                         Index);                             \
  template double serial::max_coherence<S>(const Mat<S>&);

SIGSPACE_INSTANTIATE(Real)
SIGSPACE_INSTANTIATE(Complex)
#undef SIGSPACE_INSTANTIATE

}  // namespace sigspace::kernels
