#include "sigspace/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "sigspace/kernels.hpp"
#include "sigspace/rng.hpp"

namespace sigspace {

std::string to_string(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::identity: return "identity";
    case DictionaryKind::unitary: return "unitary";
    case DictionaryKind::overcomplete_dft: return "overcomplete_dft";
    case DictionaryKind::custom: return "custom";
  }
  return "custom";
}

DictionaryKind parse_dictionary_kind(const std::string& name) {
  if (name == "identity") return DictionaryKind::identity;
  if (name == "unitary") return DictionaryKind::unitary;
  if (name == "overcomplete_dft") return DictionaryKind::overcomplete_dft;
  if (name == "custom") return DictionaryKind::custom;
  throw InvalidArgument("unknown dictionary kind '" + name + "'");
}

template <class S>
Dictionary<S>::Dictionary(Mat<S> atoms, DictionaryKind kind, Index redundancy)
    : atoms_(std::move(atoms)), kind_(kind), redundancy_(redundancy) {
  norms_ = kernels::atom_norms(atoms_);
  unit_norm_ = (norms_.array() - 1.0).abs().maxCoeff() <= 1e-12 || atoms_.cols() == 0;
}

Dictionary<Complex> overcomplete_dft(Index d, Index redundancy) {
  if (d < 2) throw InvalidArgument("overcomplete_dft: d must be at least 2");
  if (redundancy < 1) throw InvalidArgument("overcomplete_dft: redundancy must be at least 1");
  if (d > std::numeric_limits<Index>::max() / redundancy) {
    throw InvalidArgument("overcomplete_dft: atom count overflows");
  }
  const Index n = d * redundancy;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Mat<Complex> atoms(d, n);
  for (Index j = 0; j < n; ++j) {
    for (Index t = 0; t < d; ++t) {
      // Reduce t*j mod n first so the phase stays accurate for large n.
      const auto phase_index = static_cast<double>((t * j) % n);
      const double angle = 2.0 * std::numbers::pi * phase_index / static_cast<double>(n);
      atoms(t, j) = std::polar(scale, angle);
    }
  }
  return Dictionary<Complex>(std::move(atoms), DictionaryKind::overcomplete_dft, redundancy);
}

template <class S>
Dictionary<S> identity_dictionary(Index d) {
  if (d < 1) throw InvalidArgument("identity_dictionary: d must be positive");
  return Dictionary<S>(Mat<S>::Identity(d, d), DictionaryKind::identity, 1);
}

template <class S>
Mat<S> gaussian_matrix(Index rows, Index cols, std::uint64_t seed, double variance,
                       bool complex_entries) {
  if (rows < 0 || cols < 0) throw InvalidArgument("gaussian_matrix: negative dimension");
  if constexpr (!is_complex_v<S>) {
    if (complex_entries) throw InvalidArgument("complex Gaussian entries need a complex field");
  }
  const double sigma = std::sqrt(variance);
  Mat<S> out(rows, cols);
#pragma omp parallel for schedule(static) if (rows * cols >= (1 << 16))
  for (Index j = 0; j < cols; ++j) {
    RandomStream stream(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    for (Index i = 0; i < rows; ++i) {
      if constexpr (is_complex_v<S>) {
        if (complex_entries) {
          const double re = stream.normal() * sigma * std::numbers::sqrt2 / 2.0;
          const double im = stream.normal() * sigma * std::numbers::sqrt2 / 2.0;
          out(i, j) = S(re, im);
        } else {
          out(i, j) = S(stream.normal() * sigma, 0.0);
        }
      } else {
        out(i, j) = stream.normal() * sigma;
      }
    }
  }
  return out;
}

template <class S>
Dictionary<S> random_orthogonal(Index d, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("random_orthogonal: d must be positive");
  const Mat<S> g = gaussian_matrix<S>(d, d, derive_seed(seed, {0x0a7401}), 1.0, is_complex_v<S>);
  Eigen::HouseholderQR<Mat<S>> qr(g);
  Mat<S> q = qr.householderQ() * Mat<S>::Identity(d, d);
  return Dictionary<S>(std::move(q), DictionaryKind::unitary, 1);
}

template <class S>
MeasurementModel<S> gaussian_measurements(Index m, Index d, std::uint64_t seed,
                                          bool complex_entries) {
  if (m < 1) throw InvalidArgument("gaussian_measurements: m must be at least 1");
  if (d < 1) throw InvalidArgument("gaussian_measurements: d must be at least 1");
  return MeasurementModel<S>{
      gaussian_matrix<S>(m, d, seed, 1.0 / static_cast<double>(m), complex_entries), 0.0};
}

template <class S>
double coherence(const Dictionary<S>& D) {
  return kernels::max_coherence(D.matrix());
}

template <class S>
RealVec gram_profile(const Dictionary<S>& D, Index i) {
  if (i < 0 || i >= D.size()) throw InvalidArgument("gram_profile: atom index out of range");
  const RealVec row = kernels::normalized_correlation_row(D.matrix(), D.norms(), i);
  std::vector<double> others;
  others.reserve(static_cast<std::size_t>(D.size() - 1));
  for (Index j = 0; j < D.size(); ++j) {
    if (j != i) others.push_back(std::min(row(j), 1.0));
  }
  std::sort(others.begin(), others.end(), std::greater<>());
  return Eigen::Map<RealVec>(others.data(), static_cast<Index>(others.size()));
}

#define SIGSPACE_INSTANTIATE(S)                                                          \
  template class Dictionary<S>;                                                          \
  template Dictionary<S> identity_dictionary<S>(Index);                                  \
  template Dictionary<S> random_orthogonal<S>(Index, std::uint64_t);                     \
  template Mat<S> gaussian_matrix<S>(Index, Index, std::uint64_t, double, bool);         \
  template MeasurementModel<S> gaussian_measurements<S>(Index, Index, std::uint64_t, bool); \
  template double coherence<S>(const Dictionary<S>&);                                    \
  template RealVec gram_profile<S>(const Dictionary<S>&, Index);

SIGSPACE_INSTANTIATE(Real)
SIGSPACE_INSTANTIATE(Complex)
#undef SIGSPACE_INSTANTIATE

}  // namespace sigspace
