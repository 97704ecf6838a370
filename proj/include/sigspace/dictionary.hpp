#pragma once

#include <cstdint>
#include <string>

#include "sigspace/linalg.hpp"

namespace sigspace {

enum class DictionaryKind : std::uint32_t { identity = 0, unitary = 1, overcomplete_dft = 2, custom = 3 };

std::string to_string(DictionaryKind kind);
DictionaryKind parse_dictionary_kind(const std::string& name);

/// d x n matrix of atoms (columns) with construction metadata.
template <class S>
class Dictionary {
 public:
  explicit Dictionary(Mat<S> atoms, DictionaryKind kind = DictionaryKind::custom,
                      Index redundancy = 1);

  Index dim() const { return atoms_.rows(); }
  Index size() const { return atoms_.cols(); }
  const Mat<S>& matrix() const { return atoms_; }
  auto atom(Index i) const { return atoms_.col(i); }
  DictionaryKind kind() const { return kind_; }
  Index redundancy() const { return redundancy_; }
  /// Every atom norm within 1e-12 of one.
  bool unit_norm() const { return unit_norm_; }
  const RealVec& norms() const { return norms_; }

 private:
  Mat<S> atoms_;
  DictionaryKind kind_;
  Index redundancy_;
  RealVec norms_;
  bool unit_norm_;
};

/// y = M x + e with |e|_2 <= noise_bound.
template <class S>
struct MeasurementModel {
  Mat<S> matrix;
  double noise_bound = 0.0;

  Index rows() const { return matrix.rows(); }
  Index cols() const { return matrix.cols(); }
  /// m <= d; callers warn when this is false.
  bool compressive() const { return matrix.rows() <= matrix.cols(); }
};

/// Atom j has entries exp(2 pi i t j / n) / sqrt(d), t = 0..d-1, n = redundancy * d.
Dictionary<Complex> overcomplete_dft(Index d, Index redundancy);

template <class S>
Dictionary<S> identity_dictionary(Index d);

/// Q factor of a seeded Gaussian matrix.
template <class S>
Dictionary<S> random_orthogonal(Index d, std::uint64_t seed);

/// rows x cols, i.i.d. N(0, variance) entries; column j uses its own stream derived
/// from (seed, j). Complex entries split the variance evenly between re and im.
template <class S>
Mat<S> gaussian_matrix(Index rows, Index cols, std::uint64_t seed, double variance,
                       bool complex_entries = false);

/// m x d Gaussian with variance 1/m. Real entries by default even when S is complex.
template <class S>
MeasurementModel<S> gaussian_measurements(Index m, Index d, std::uint64_t seed,
                                          bool complex_entries = false);

/// max_{i != j} |<d_i, d_j>| / (|d_i| |d_j|).
template <class S>
double coherence(const Dictionary<S>& D);

/// Normalized correlations of atom i with the other n-1 atoms, sorted descending.
template <class S>
RealVec gram_profile(const Dictionary<S>& D, Index i);

}  // namespace sigspace
