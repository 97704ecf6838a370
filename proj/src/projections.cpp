#include "sigspace/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sigspace/kernels.hpp"
#include "sigspace/rng.hpp"

namespace sigspace {

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::threshold: return "threshold";
    case SchemeKind::omp: return "omp";
    case SchemeKind::cosamp_rep: return "cosamp_rep";
    case SchemeKind::iht_rep: return "iht_rep";
    case SchemeKind::eps_omp: return "eps_omp";
    case SchemeKind::eps_threshold: return "eps_threshold";
    case SchemeKind::oracle: return "oracle";
  }
  return "threshold";
}

SchemeKind parse_scheme_kind(const std::string& name) {
  for (auto k : {SchemeKind::threshold, SchemeKind::omp, SchemeKind::cosamp_rep,
                 SchemeKind::iht_rep, SchemeKind::eps_omp, SchemeKind::eps_threshold,
                 SchemeKind::oracle}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown selection scheme '" + name + "'");
}

void validate(const SelectionScheme& scheme) {
  if (!(scheme.eps >= 0.0 && scheme.eps < 1.0)) {
    throw InvalidArgument("eps must lie in [0, 1), got " + std::to_string(scheme.eps));
  }
  if (scheme.cosamp_max_iters < 1 || scheme.iht_max_iters < 1) {
    throw InvalidArgument("iteration caps must be positive");
  }
  if (!(scheme.iht_step > 0.0)) throw InvalidArgument("IHT step must be positive");
}

double extension_threshold(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in [0, 1)");
  return 1.0 - eps * eps - 1e-12;
}

bool oracle_feasible(Index n, Index k) { return n <= 24 || k <= 3; }

namespace {

void check_k(Index k, Index n) {
  if (k < 0) throw InvalidArgument("sparsity must be non-negative");
  if (k > n) {
    throw InvalidArgument("sparsity " + std::to_string(k) + " exceeds atom count " +
                          std::to_string(n));
  }
}

// Indices of the k largest values, ties to the lowest index.
std::vector<Index> top_k(const RealVec& values, Index k) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  k = std::min<Index>(k, values.size());
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](Index a, Index b) {
    return values(a) > values(b) || (values(a) == values(b) && a < b);
  });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

// argmax over unmasked entries; -1 when every entry is masked.
Index masked_argmax(const RealVec& values, const std::vector<char>& masked) {
  Index best = -1;
  double best_value = -1.0;
  for (Index i = 0; i < values.size(); ++i) {
    if (!masked[static_cast<std::size_t>(i)] && values(i) > best_value) {
      best = i;
      best_value = values(i);
    }
  }
  return best;
}

template <class S>
RealVec magnitudes(const Vec<S>& v) {
  return v.cwiseAbs();
}

template <class S>
double residual_sq(const Dictionary<S>& D, const SupportSet& T, const Vec<S>& z) {
  return coproject<S>(D.matrix(), T, z).squaredNorm();
}

// Neighborhood of a single atom, computed on demand.
template <class S>
std::vector<Index> neighborhood_of(const Dictionary<S>& D, Index i, double threshold) {
  const RealVec row = kernels::normalized_correlation_row(D.matrix(), D.norms(), i);
  std::vector<Index> out;
  for (Index j = 0; j < D.size(); ++j) {
    if (j == i || row(j) >= threshold) out.push_back(j);
  }
  return out;
}

// Greedy selection with exclusion of the extended support. `refit` chooses between
// the OMP flavor (correlate against the running residual) and the thresholding
// flavor (correlate once against z).
template <class S, class Neighbors>
SupportSet extended_greedy(const Dictionary<S>& D, const Vec<S>& z, Index k, bool refit,
                           Neighbors&& neighbors) {
  const Index n = D.size();
  std::vector<char> excluded(static_cast<std::size_t>(n), 0);
  SupportSet picked(n);
  RealVec corr = magnitudes<S>(kernels::correlate(D.matrix(), z));
  for (Index round = 0; round < k; ++round) {
    const Index best = masked_argmax(corr, excluded);
    if (best < 0) break;
    picked.insert(best);
    for (Index j : neighbors(best)) excluded[static_cast<std::size_t>(j)] = 1;
    if (refit && round + 1 < k) {
      const Vec<S> r = coproject<S>(D.matrix(), picked, z);
      corr = magnitudes<S>(kernels::correlate(D.matrix(), r));
    }
  }
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i) {
    if (excluded[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return SupportSet(n, std::move(out));
}

}  // namespace

template <class S>
SupportSet threshold_select(const Dictionary<S>& D, const Vec<S>& z, Index k) {
  check_k(k, D.size());
  const RealVec corr = magnitudes<S>(kernels::correlate(D.matrix(), z));
  return SupportSet(D.size(), top_k(corr, k));
}

template <class S>
SupportSet omp_select(const Dictionary<S>& D, const Vec<S>& z, Index k) {
  check_k(k, D.size());
  // Plain OMP is the greedy loop whose exclusion set is only the picked atoms.
  return extended_greedy(D, z, k, true, [](Index i) { return std::vector<Index>{i}; });
}

template <class S>
SupportSet eps_extend(const Dictionary<S>& D, const SupportSet& T, double eps) {
  const double threshold = extension_threshold(eps);
  SupportSet out(D.size());
  std::vector<char> member(static_cast<std::size_t>(D.size()), 0);
  for (Index j : T) {
    if (j < 0 || j >= D.size()) throw InvalidArgument("eps_extend: index out of range");
    for (Index i : neighborhood_of(D, j, threshold)) member[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<Index> idx;
  for (Index i = 0; i < D.size(); ++i) {
    if (member[static_cast<std::size_t>(i)]) idx.push_back(i);
  }
  return SupportSet(D.size(), std::move(idx));
}

template <class S>
Index extension_factor(const Dictionary<S>& D, double eps) {
  const auto table = kernels::neighborhoods(D.matrix(), extension_threshold(eps));
  Index zeta = 1;
  for (const auto& list : table) zeta = std::max(zeta, static_cast<Index>(list.size()));
  return zeta;
}

template <class S>
SupportSet eps_omp_select(const Dictionary<S>& D, const Vec<S>& z, Index k, double eps) {
  check_k(k, D.size());
  const double threshold = extension_threshold(eps);
  return extended_greedy(D, z, k, true,
                         [&](Index i) { return neighborhood_of(D, i, threshold); });
}

template <class S>
SupportSet eps_threshold_select(const Dictionary<S>& D, const Vec<S>& z, Index k, double eps) {
  check_k(k, D.size());
  const double threshold = extension_threshold(eps);
  return extended_greedy(D, z, k, false,
                         [&](Index i) { return neighborhood_of(D, i, threshold); });
}

namespace {

template <class S>
RepPursuitResult cosamp_rep(const Dictionary<S>& D, const Vec<S>& z, Index k,
                            const SelectionScheme& caps) {
  const Mat<S>& A = D.matrix();
  const Index n = D.size();
  const double znorm = z.norm();
  SupportSet support(n);
  Vec<S> coeffs;  // coefficients on `support`
  Vec<S> r = z;
  RepPursuitResult best{SupportSet(n, top_k(magnitudes<S>(kernels::correlate(A, z)), k)), false, 0};
  double best_res = std::numeric_limits<double>::infinity();
  double prev_res = znorm;
  for (int it = 1; it <= caps.cosamp_max_iters; ++it) {
    const RealVec proxy = magnitudes<S>(kernels::correlate(A, r));
    const SupportSet merged = SupportSet(n, top_k(proxy, 2 * k)).unite(support);
    const Vec<S> b = min_norm_solve<S>(subdict(A, merged), z);
    std::vector<std::pair<Index, S>> kept;
    for (Index q : top_k(magnitudes<S>(b), k)) kept.emplace_back(merged[q], b(q));
    std::sort(kept.begin(), kept.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Index> atoms;
    coeffs.resize(static_cast<Index>(kept.size()));
    for (std::size_t q = 0; q < kept.size(); ++q) {
      atoms.push_back(kept[q].first);
      coeffs(static_cast<Index>(q)) = kept[q].second;
    }
    support = SupportSet(n, std::move(atoms));
    r = z - subdict(A, support) * coeffs;
    const double res = r.norm();
    if (res < best_res) {
      best_res = res;
      best.support = support;
    }
    best.iterations = it;
    if (res <= 1e-12 * znorm || prev_res - res < caps.cosamp_tol * prev_res) {
      best.converged = true;
      break;
    }
    prev_res = res;
  }
  return best;
}

template <class S>
RepPursuitResult iht_rep(const Dictionary<S>& D, const Vec<S>& z, Index k,
                         const SelectionScheme& caps) {
  const Mat<S>& A = D.matrix();
  const Index n = D.size();
  Vec<S> alpha = Vec<S>::Zero(n);
  RepPursuitResult best{SupportSet(n, top_k(magnitudes<S>(kernels::correlate(A, z)), k)), false, 0};
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= caps.iht_max_iters; ++it) {
    const Vec<S> g = alpha + caps.iht_step * kernels::correlate<S>(A, Vec<S>(z - A * alpha));
    const auto keep = top_k(magnitudes<S>(g), k);
    Vec<S> next = Vec<S>::Zero(n);
    for (Index i : keep) next(i) = g(i);
    const double change = (next - alpha).norm();
    alpha = std::move(next);
    const double res = (z - A * alpha).norm();
    if (res < best_res) {
      best_res = res;
      best.support = SupportSet(n, keep);
    }
    best.iterations = it;
    if (!std::isfinite(res)) break;
    if (change <= 1e-10 * alpha.norm() || res <= 1e-12 * z.norm()) {
      best.converged = true;
      break;
    }
  }
  return best;
}

}  // namespace

template <class S>
RepPursuitResult rep_pursuit_select(const Dictionary<S>& D, const Vec<S>& z, Index k,
                                    SchemeKind method, const SelectionScheme& caps) {
  check_k(k, D.size());
  validate(caps);
  if (z.size() != D.dim()) throw DimensionError("rep_pursuit_select: vector length != d");
  switch (method) {
    case SchemeKind::cosamp_rep: return cosamp_rep(D, z, k, caps);
    case SchemeKind::iht_rep: return iht_rep(D, z, k, caps);
    default: throw InvalidArgument("rep_pursuit_select: method must be cosamp_rep or iht_rep");
  }
}

template <class S>
SupportSet oracle_select(const Dictionary<S>& D, const Vec<S>& z, Index k) {
  check_k(k, D.size());
  if (!oracle_feasible(D.size(), k)) {
    throw BudgetExceeded("oracle_select: C(" + std::to_string(D.size()) + ", " +
                         std::to_string(k) + ") exceeds the enumeration guard");
  }
  if (z.size() != D.dim()) throw DimensionError("oracle_select: vector length != d");
  const auto combos = kernels::combinations(D.size(), k);
  std::vector<double> residuals(combos.size());
  const auto count = static_cast<std::int64_t>(combos.size());
#pragma omp parallel for schedule(dynamic, 16) if (count > 64)
  for (std::int64_t c = 0; c < count; ++c) {
    const auto& idx = combos[static_cast<std::size_t>(c)];
    residuals[static_cast<std::size_t>(c)] = residual_sq(D, SupportSet(D.size(), idx), z);
  }
  const double tie = 1e-12 * z.squaredNorm();
  std::size_t best = 0;
  for (std::size_t c = 1; c < residuals.size(); ++c) {
    if (residuals[c] < residuals[best] - tie) best = c;
  }
  return SupportSet(D.size(), combos.empty() ? std::vector<Index>{} : combos[best]);
}

template <class S>
Selector<S>::Selector(const Dictionary<S>& D, SelectionScheme scheme)
    : dict_(&D), scheme_(scheme) {
  validate(scheme_);
  if (scheme_.uses_extension()) {
    neighbors_ = kernels::neighborhoods(D.matrix(), extension_threshold(scheme_.eps));
    for (const auto& list : neighbors_) zeta_ = std::max(zeta_, static_cast<Index>(list.size()));
  }
}

template <class S>
SupportSet Selector<S>::select(const Vec<S>& z, Index k) const {
  const Dictionary<S>& D = *dict_;
  switch (scheme_.kind) {
    case SchemeKind::threshold: return threshold_select(D, z, k);
    case SchemeKind::omp: return omp_select(D, z, k);
    case SchemeKind::cosamp_rep:
    case SchemeKind::iht_rep: return rep_pursuit_select(D, z, k, scheme_.kind, scheme_).support;
    case SchemeKind::oracle: return oracle_select(D, z, k);
    case SchemeKind::eps_omp:
    case SchemeKind::eps_threshold: {
      check_k(k, D.size());
      auto lookup = [this](Index i) -> const std::vector<Index>& {
        return neighbors_[static_cast<std::size_t>(i)];
      };
      return extended_greedy(D, z, k, scheme_.kind == SchemeKind::eps_omp, lookup);
    }
  }
  throw InvalidArgument("unknown scheme");
}

template <class S>
SupportSet select(const Dictionary<S>& D, const SelectionScheme& scheme, const Vec<S>& z,
                  Index k) {
  validate(scheme);
  switch (scheme.kind) {
    case SchemeKind::eps_omp: return eps_omp_select(D, z, k, scheme.eps);
    case SchemeKind::eps_threshold: return eps_threshold_select(D, z, k, scheme.eps);
    default: return Selector<S>(D, scheme).select(z, k);
  }
}

namespace {

template <class S>
Vec<S> gaussian_vector(RandomStream& rng, Index size) {
  Vec<S> v(size);
  for (Index i = 0; i < size; ++i) {
    if constexpr (is_complex_v<S>) v(i) = S(rng.normal(), rng.normal());
    else v(i) = rng.normal();
  }
  return v;
}

template <class S>
Vec<S> near_optimality_probe(const Dictionary<S>& D, Index k, std::int64_t trial,
                             std::uint64_t seed) {
  RandomStream rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
  if (trial % 2 == 0) return gaussian_vector<S>(rng, D.dim());
  std::vector<Index> pool(static_cast<std::size_t>(D.size()));
  std::iota(pool.begin(), pool.end(), Index{0});
  std::vector<Index> T;
  for (Index q = 0; q < k; ++q) {
    const auto pick = rng.below(pool.size());
    T.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  const Vec<S> coeffs = gaussian_vector<S>(rng, k);
  Vec<S> z = subdict(D.matrix(), SupportSet(D.size(), T)) * coeffs;
  constexpr double sigmas[] = {0.0, 0.1, 1.0};
  const double sigma = sigmas[(trial / 2) % 3];
  if (sigma > 0.0) {
    const double scale = sigma * z.norm() / std::sqrt(static_cast<double>(D.dim()));
    z += scale * gaussian_vector<S>(rng, D.dim());
  }
  return z;
}

}  // namespace

template <class S>
NearOptimalityEstimate estimate_near_optimality(const SelectionScheme& scheme,
                                                const Dictionary<S>& D, Index k,
                                                std::int64_t trials, std::uint64_t seed) {
  validate(scheme);
  check_k(k, D.size());
  if (!oracle_feasible(D.size(), k)) {
    throw BudgetExceeded("estimate_near_optimality: oracle infeasible for this (n, k)");
  }
  if (trials < 1) throw InvalidArgument("estimate_near_optimality: trials must be positive");
  const Selector<S> selector(D, scheme);
  double c_hat = -std::numeric_limits<double>::infinity();
  double ct_hat = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 1) reduction(max : c_hat) reduction(min : ct_hat)
  for (std::int64_t t = 0; t < trials; ++t) {
    const Vec<S> z = near_optimality_probe(D, k, t, seed);
    const double zz = z.squaredNorm();
    const SupportSet chosen = selector.select(z, k);
    const SupportSet best = oracle_select(D, z, k);
    const Vec<S> p_chosen = project<S>(D.matrix(), chosen, z);
    const Vec<S> p_best = project<S>(D.matrix(), best, z);
    const double res_chosen = (z - p_chosen).squaredNorm();
    const double res_best = (z - p_best).squaredNorm();
    double residual_ratio;
    if (res_best <= 1e-20 * zz) {
      residual_ratio = res_chosen <= 1e-16 * zz ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      residual_ratio = res_chosen / res_best;
    }
    const double cap_best = p_best.squaredNorm();
    const double captured_ratio = cap_best > 0.0 ? p_chosen.squaredNorm() / cap_best : 1.0;
    c_hat = std::max(c_hat, residual_ratio);
    ct_hat = std::min(ct_hat, captured_ratio);
  }
  return NearOptimalityEstimate{c_hat, ct_hat, trials};
}

#define SIGSPACE_INSTANTIATE(S)                                                                  \
  template SupportSet threshold_select<S>(const Dictionary<S>&, const Vec<S>&, Index);           \
  template SupportSet omp_select<S>(const Dictionary<S>&, const Vec<S>&, Index);                 \
  template SupportSet eps_extend<S>(const Dictionary<S>&, const SupportSet&, double);            \
  template Index extension_factor<S>(const Dictionary<S>&, double);                              \
  template SupportSet eps_omp_select<S>(const Dictionary<S>&, const Vec<S>&, Index, double);     \
  template SupportSet eps_threshold_select<S>(const Dictionary<S>&, const Vec<S>&, Index,        \
                                              double);                                           \
  template RepPursuitResult rep_pursuit_select<S>(const Dictionary<S>&, const Vec<S>&, Index,    \
                                                  SchemeKind, const SelectionScheme&);           \
  template SupportSet oracle_select<S>(const Dictionary<S>&, const Vec<S>&, Index);              \
  template class Selector<S>;                                                                    \
  template SupportSet select<S>(const Dictionary<S>&, const SelectionScheme&, const Vec<S>&,     \
                                Index);                                                          \
  template NearOptimalityEstimate estimate_near_optimality<S>(                                   \
      const SelectionScheme&, const Dictionary<S>&, Index, std::int64_t, std::uint64_t);

SIGSPACE_INSTANTIATE(Real)
SIGSPACE_INSTANTIATE(Complex)
#undef SIGSPACE_INSTANTIATE

}  // namespace sigspace
