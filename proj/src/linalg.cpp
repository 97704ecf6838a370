#include "sigspace/linalg.hpp"

#include <algorithm>
#include <limits>

namespace sigspace {

SupportSet::SupportSet(Index universe) : universe_(universe) {
  if (universe < 0) throw InvalidArgument("support universe must be non-negative");
}

SupportSet::SupportSet(Index universe, std::vector<Index> indices)
    : universe_(universe), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= universe_)) {
    throw InvalidArgument("support index out of range for universe " + std::to_string(universe_));
  }
}

SupportSet::SupportSet(Index universe, std::initializer_list<Index> indices)
    : SupportSet(universe, std::vector<Index>(indices)) {}

bool SupportSet::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

void SupportSet::insert(Index i) {
  if (i < 0 || i >= universe_) {
    throw InvalidArgument("support index " + std::to_string(i) + " out of range");
  }
  auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
  if (it == indices_.end() || *it != i) indices_.insert(it, i);
}

SupportSet SupportSet::unite(const SupportSet& other) const {
  // a default-constructed (universe 0) set is empty and joins anything
  if (universe_ != 0 && other.universe_ != 0 && universe_ != other.universe_) {
    throw InvalidArgument("SupportSet::unite: universes differ");
  }
  SupportSet out(std::max(universe_, other.universe_));
  out.indices_.reserve(indices_.size() + other.indices_.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out.indices_));
  return out;
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

double pinv_cutoff(Index rows, Index cols) {
  return 10.0 * static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

template <class S>
Mat<S> subdict(const Mat<S>& atoms, const SupportSet& T) {
  Mat<S> out(atoms.rows(), T.size());
  Index c = 0;
  for (Index j : T) {
    if (j < 0 || j >= atoms.cols()) {
      throw InvalidArgument("atom index " + std::to_string(j) + " out of range (n = " +
                            std::to_string(atoms.cols()) + ")");
    }
    out.col(c++) = atoms.col(j);
  }
  return out;
}

namespace {

template <class S>
Eigen::JacobiSVD<Mat<S>> thin_svd(const Mat<S>& A, unsigned options) {
  Eigen::JacobiSVD<Mat<S>> svd(A, options);
  svd.setThreshold(pinv_cutoff(A.rows(), A.cols()));
  return svd;
}

}  // namespace

template <class S>
Mat<S> range_basis(const Mat<S>& A) {
  if (A.cols() == 0 || A.rows() == 0) return Mat<S>(A.rows(), 0);
  auto svd = thin_svd(A, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(svd.rank());
}

template <class S>
Vec<S> min_norm_solve(const Mat<S>& A, const Vec<S>& b) {
  if (A.rows() != b.size()) throw DimensionError("min_norm_solve: rows(A) != size(b)");
  if (A.cols() == 0) return Vec<S>(0);
  if (A.rows() == 0) return Vec<S>::Zero(A.cols());
  auto svd = thin_svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.solve(b);
}

template <class S>
Vec<S> project(const Mat<S>& atoms, const SupportSet& T, const Vec<S>& z) {
  if (z.size() != atoms.rows()) throw DimensionError("project: vector length != signal dimension");
  if (T.empty()) return Vec<S>::Zero(z.size());
  const Mat<S> U = range_basis<S>(subdict(atoms, T));
  return U * (U.adjoint() * z);
}

template <class S>
Vec<S> coproject(const Mat<S>& atoms, const SupportSet& T, const Vec<S>& z) {
  return z - project(atoms, T, z);
}

template <class S>
Vec<S> ls_synthesize_with_product(const Mat<S>& MD, const Mat<S>& atoms, const SupportSet& T,
                                  const Vec<S>& y) {
  if (MD.rows() != y.size()) throw DimensionError("ls_synthesize: rows(M) != size(y)");
  if (MD.cols() != atoms.cols()) throw DimensionError("ls_synthesize: M*D has wrong atom count");
  if (T.empty()) return Vec<S>::Zero(atoms.rows());
  const Vec<S> coeffs = min_norm_solve<S>(subdict(MD, T), y);
  return subdict(atoms, T) * coeffs;
}

template <class S>
Vec<S> ls_synthesize(const Mat<S>& M, const Mat<S>& atoms, const SupportSet& T, const Vec<S>& y) {
  if (M.cols() != atoms.rows()) throw DimensionError("ls_synthesize: cols(M) != rows(D)");
  if (M.rows() != y.size()) throw DimensionError("ls_synthesize: rows(M) != size(y)");
  if (T.empty()) return Vec<S>::Zero(atoms.rows());
  const Mat<S> DT = subdict(atoms, T);
  const Vec<S> coeffs = min_norm_solve<S>(Mat<S>(M * DT), y);
  return DT * coeffs;
}

template <class S>
double spectral_norm(const Mat<S>& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat<S>> svd(A);
  return svd.singularValues()(0);
}

#define SIGSPACE_INSTANTIATE(S)                                                                \
  template Mat<S> subdict<S>(const Mat<S>&, const SupportSet&);                                \
  template Mat<S> range_basis<S>(const Mat<S>&);                                               \
  template Vec<S> min_norm_solve<S>(const Mat<S>&, const Vec<S>&);                             \
  template Vec<S> project<S>(const Mat<S>&, const SupportSet&, const Vec<S>&);                 \
  template Vec<S> coproject<S>(const Mat<S>&, const SupportSet&, const Vec<S>&);               \
  template Vec<S> ls_synthesize<S>(const Mat<S>&, const Mat<S>&, const SupportSet&,            \
                                   const Vec<S>&);                                             \
  template Vec<S> ls_synthesize_with_product<S>(const Mat<S>&, const Mat<S>&,                  \
                                                const SupportSet&, const Vec<S>&);             \
  template double spectral_norm<S>(const Mat<S>&);

SIGSPACE_INSTANTIATE(Real)
SIGSPACE_INSTANTIATE(Complex)
#undef SIGSPACE_INSTANTIATE

}  // namespace sigspace
