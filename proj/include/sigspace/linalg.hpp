#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace sigspace {

using Index = Eigen::Index;
using Real = double;
using Complex = std::complex<double>;

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
using RealVec = Vec<Real>;
using RealMat = Mat<Real>;

template <class S>
inline constexpr bool is_complex_v = !std::is_same_v<S, Real>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied parameter (out-of-range epsilon, k > n, empty grid...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed its combinatorial guard.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Sorted, duplicate-free set of atom indices drawn from {0, ..., universe-1}.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(Index universe);
  /// Sorts and deduplicates; throws InvalidArgument on indices outside the universe.
  SupportSet(Index universe, std::vector<Index> indices);
  SupportSet(Index universe, std::initializer_list<Index> indices);

  Index universe() const { return universe_; }
  Index size() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool contains(Index i) const;
  void insert(Index i);

  const std::vector<Index>& indices() const { return indices_; }
  Index operator[](Index pos) const { return indices_[static_cast<std::size_t>(pos)]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Throws InvalidArgument when both universes are set and differ.
  SupportSet unite(const SupportSet& other) const;
  bool is_subset_of(const SupportSet& other) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  Index universe_ = 0;
  std::vector<Index> indices_;
};

/// Relative singular-value cutoff used by every pseudo-inverse in the library:
/// values below 10 * max(rows, cols) * eps * sigma_max count as zero.
double pinv_cutoff(Index rows, Index cols);

template <class S>
Mat<S> subdict(const Mat<S>& atoms, const SupportSet& T);

/// Orthonormal basis of range(A), rank decided by pinv_cutoff.
template <class S>
Mat<S> range_basis(const Mat<S>& A);

/// Minimum-norm least-squares solution of A x = b.
template <class S>
Vec<S> min_norm_solve(const Mat<S>& A, const Vec<S>& b);

/// P_T z: orthogonal projection of z onto range(D_T).
template <class S>
Vec<S> project(const Mat<S>& atoms, const SupportSet& T, const Vec<S>& z);

/// Q_T z = z - P_T z.
template <class S>
Vec<S> coproject(const Mat<S>& atoms, const SupportSet& T, const Vec<S>& z);

/// x_p = D_T (M D_T)^+ y.
template <class S>
Vec<S> ls_synthesize(const Mat<S>& M, const Mat<S>& atoms, const SupportSet& T, const Vec<S>& y);

/// Same as ls_synthesize with the product M*D supplied by the caller, so repeated
/// solves against one operator pair skip the m x d x n product.
template <class S>
Vec<S> ls_synthesize_with_product(const Mat<S>& MD, const Mat<S>& atoms, const SupportSet& T,
                                  const Vec<S>& y);

/// Spectral norm (largest singular value).
template <class S>
double spectral_norm(const Mat<S>& A);

}  // namespace sigspace
