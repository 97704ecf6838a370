#include "sigspace/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "sigspace/kernels.hpp"
#include "sigspace/plot.hpp"
#include "sigspace/rng.hpp"

namespace sigspace {

std::string to_string(SupportMode mode) {
  return mode == SupportMode::clustered ? "clustered" : "separated";
}

SupportMode parse_support_mode(const std::string& name) {
  if (name == "clustered") return SupportMode::clustered;
  if (name == "separated") return SupportMode::separated;
  throw InvalidArgument("unknown support mode '" + name + "'");
}

namespace {

constexpr std::uint64_t kSignalTag = 1;
constexpr std::uint64_t kMatrixTag = 2;
constexpr std::uint64_t kNoiseTag = 3;

template <class S>
S gaussian_scalar(RandomStream& rng) {
  if constexpr (is_complex_v<S>) {
    const double re = rng.normal();
    const double im = rng.normal();
    return S(re, im) * std::sqrt(0.5);
  } else {
    return rng.normal();
  }
}

// k - 1 distinct sorted values from [0, range), Floyd's sampling.
std::vector<std::uint64_t> sorted_sample(RandomStream& rng, std::uint64_t range, std::uint64_t count) {
  std::set<std::uint64_t> picked;
  for (std::uint64_t j = range - count; j < range; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!picked.insert(t).second) picked.insert(j);
  }
  return {picked.begin(), picked.end()};
}

}  // namespace

template <class S>
SparseSignal<S> gen_sparse_signal(const Dictionary<S>& D, Index k, SupportMode mode,
                                  std::uint64_t seed) {
  const Index n = D.size();
  if (k < 1 || k > n) throw InvalidArgument("gen_sparse_signal: need 1 <= k <= n");
  RandomStream rng(seed);
  const auto start = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  std::vector<Index> idx;
  if (mode == SupportMode::clustered || k == 1) {
    for (Index i = 0; i < k; ++i) idx.push_back((start + i) % n);
  } else {
    const Index gap = n / (2 * k);
    if (gap < 1) throw InvalidArgument("gen_sparse_signal: k too large for the separation rule");
    // Each admissible set is hit by exactly k (start, slack split) pairs, so
    // a uniform start plus a uniform composition of the slack is uniform on sets.
    const auto slack = static_cast<std::uint64_t>(n - k * gap);
    const auto bars = sorted_sample(rng, slack + static_cast<std::uint64_t>(k) - 1,
                                    static_cast<std::uint64_t>(k) - 1);
    std::uint64_t prev_bar = 0;
    Index pos = start;
    idx.push_back(pos);
    for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(k); ++j) {
      // Stars between consecutive bars form the j-th extra gap.
      const std::uint64_t extra = bars[j] - prev_bar - (j == 0 ? 0 : 1);
      prev_bar = bars[j];
      pos = (pos + gap + static_cast<Index>(extra)) % n;
      idx.push_back(pos);
    }
  }
  SparseSignal<S> out;
  out.support = SupportSet(n, idx);
  out.alpha = Vec<S>::Zero(n);
  for (Index i : out.support) out.alpha(i) = gaussian_scalar<S>(rng);
  out.x = D.matrix() * out.alpha;
  const double norm = out.x.norm();
  if (norm > 0.0) {
    out.x /= norm;
    out.alpha /= norm;
  }
  return out;
}

Variant named_variant(const std::string& name, double eps) {
  Variant v;
  v.label = name;
  auto scheme = [](SchemeKind kind, double e) {
    SelectionScheme s;
    s.kind = kind;
    s.eps = e;
    return s;
  };
  if (name == "sscosamp-threshold") {
    v.cfg.scheme_expand = v.cfg.scheme_shrink = scheme(SchemeKind::threshold, 0.0);
  } else if (name == "sscosamp-eps-threshold") {
    v.cfg.scheme_expand = v.cfg.scheme_shrink = scheme(SchemeKind::eps_threshold, eps);
  } else if (name == "sscosamp-omp") {
    v.cfg.scheme_expand = v.cfg.scheme_shrink = scheme(SchemeKind::omp, 0.0);
  } else if (name == "sscosamp-eps-omp") {
    v.cfg.scheme_expand = v.cfg.scheme_shrink = scheme(SchemeKind::eps_omp, eps);
  } else if (name == "eps-omp") {
    v.kind = VariantKind::eps_omp;
    v.eps = eps;
  } else {
    throw InvalidArgument("unknown variant '" + name + "'");
  }
  return v;
}

void validate(const TrialConfig& cfg) {
  if (cfg.d < 2 || cfg.redundancy < 1) throw InvalidArgument("trial: need d >= 2, redundancy >= 1");
  if (cfg.k < 1 || cfg.k > cfg.d * cfg.redundancy) throw InvalidArgument("trial: need 1 <= k <= n");
  if (cfg.m < 1 || cfg.m > cfg.d) throw InvalidArgument("trial: need 1 <= m <= d");
  if (!(cfg.success_tol > 0.0)) throw InvalidArgument("trial: success_tol must be positive");
  if (!(cfg.noise_level >= 0.0)) throw InvalidArgument("trial: noise_level must be non-negative");
  if (cfg.variant.kind == VariantKind::eps_omp) {
    if (!(cfg.variant.eps >= 0.0 && cfg.variant.eps < 1.0)) throw InvalidArgument("eps must lie in [0, 1)");
  } else {
    SSCoSaMPConfig c = cfg.variant.cfg;
    c.k = cfg.k;
    validate(c);
  }
}

std::uint64_t config_hash(const TrialConfig& cfg) {
  std::ostringstream key;
  key << std::setprecision(17) << cfg.d << '|' << cfg.redundancy << '|' << cfg.k << '|' << cfg.m
      << '|' << cfg.variant.label << '|' << to_string(cfg.mode) << '|' << cfg.noise_level << '|'
      << cfg.seed << '|' << cfg.success_tol;
  // FNV-1a, stable across platforms.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

using CVec = Vec<Complex>;
using CMat = Mat<Complex>;

struct Instance {
  MeasurementModel<Complex> M;
  CMat MD;
  SparseSignal<Complex> signal;
  CVec y;
};

Instance make_instance(const Dictionary<Complex>& D, Index k, Index m, SupportMode mode,
                       double noise_level, std::uint64_t trial_seed) {
  Instance inst;
  inst.signal = gen_sparse_signal(D, k, mode, derive_seed(trial_seed, {kSignalTag}));
  // Real Gaussian M with variance 1/m, stored complex so it acts on complex signals.
  inst.M = gaussian_measurements<Complex>(m, D.dim(), derive_seed(trial_seed, {kMatrixTag}), false);
  inst.MD = inst.M.matrix * D.matrix();
  inst.y = inst.M.matrix * inst.signal.x;
  if (noise_level > 0.0) {
    RandomStream rng(derive_seed(trial_seed, {kNoiseTag}));
    CVec e(m);
    for (Index i = 0; i < m; ++i) e(i) = gaussian_scalar<Complex>(rng);
    e *= noise_level * inst.y.norm() / std::max(e.norm(), 1e-300);
    inst.M.noise_bound = e.norm();
    inst.y += e;
  }
  return inst;
}

// eps-OMP on M*D. Candidates are ranked by normalized correlation; the
// D-neighborhood of each pick is excluded and finally added to the support.
CVec eps_omp_measurements(const Instance& inst, const Dictionary<Complex>& D,
                          const std::vector<std::vector<Index>>& neighbors, Index k) {
  const Index n = D.size();
  const RealVec norms = inst.MD.colwise().norm().transpose();
  std::vector<char> excluded(static_cast<std::size_t>(n), 0);
  SupportSet picked(n);
  CVec r = inst.y;
  for (Index round = 0; round < k; ++round) {
    const CVec corr = kernels::correlate(inst.MD, r);
    Index best = -1;
    double best_value = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (excluded[static_cast<std::size_t>(i)] || norms(i) == 0.0) continue;
      const double v = std::abs(corr(i)) / norms(i);
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    if (best < 0) break;
    picked.insert(best);
    for (Index j : neighbors[static_cast<std::size_t>(best)]) excluded[static_cast<std::size_t>(j)] = 1;
    r = coproject<Complex>(inst.MD, picked, inst.y);
  }
  std::vector<Index> ext;
  for (Index i = 0; i < n; ++i) {
    if (excluded[static_cast<std::size_t>(i)]) ext.push_back(i);
  }
  return ls_synthesize_with_product<Complex>(inst.MD, D.matrix(), SupportSet(n, ext), inst.y);
}

// A variant bound to one dictionary; selectors and neighbor tables built once.
class PreparedVariant {
 public:
  PreparedVariant(const Dictionary<Complex>& D, const Variant& v)
      : variant_(v),
        expand_(D, v.kind == VariantKind::sscosamp ? v.cfg.scheme_expand : eps_scheme(v.eps)),
        shrink_(D, v.kind == VariantKind::sscosamp ? v.cfg.scheme_shrink : eps_scheme(v.eps)) {}

  TrialRecord run(const Instance& inst, Index k, double success_tol) const {
    const auto t0 = std::chrono::steady_clock::now();
    const Dictionary<Complex>& D = shrink_.dictionary();
    TrialRecord rec;
    CVec estimate;
    if (variant_.kind == VariantKind::eps_omp) {
      estimate = eps_omp_measurements(inst, D, shrink_.neighbors(), k);
      rec.iterations = static_cast<int>(k);
    } else {
      SSCoSaMPConfig cfg = variant_.cfg;
      cfg.k = k;
      const auto report = sscosamp<Complex>(inst.y, inst.M, inst.MD, expand_, shrink_, cfg, nullptr);
      estimate = report.estimate;
      rec.iterations = report.iterations;
    }
    const double xnorm = inst.signal.x.norm();
    rec.relative_error = (estimate - inst.signal.x).norm() / (xnorm > 0.0 ? xnorm : 1.0);
    rec.success = rec.relative_error <= success_tol;
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
  }

 private:
  static SelectionScheme eps_scheme(double eps) {
    SelectionScheme s;
    s.kind = SchemeKind::eps_omp;
    s.eps = eps;
    return s;
  }

  Variant variant_;
  Selector<Complex> expand_;
  Selector<Complex> shrink_;
};

}  // namespace

TrialRecord run_trial(const TrialConfig& cfg) {
  validate(cfg);
  const auto D = overcomplete_dft(cfg.d, cfg.redundancy);
  const PreparedVariant prepared(D, cfg.variant);
  const Instance inst = make_instance(D, cfg.k, cfg.m, cfg.mode, cfg.noise_level, cfg.seed);
  TrialRecord rec = prepared.run(inst, cfg.k, cfg.success_tol);
  rec.config_hash = config_hash(cfg);
  return rec;
}

void validate(const SweepConfig& cfg) {
  if (cfg.m_grid.empty()) throw InvalidArgument("sweep: empty m grid");
  if (cfg.variants.empty()) throw InvalidArgument("sweep: no variants");
  if (cfg.trials < 1) throw InvalidArgument("sweep: trials must be positive (rates undefined otherwise)");
  for (const auto& v : cfg.variants) {
    if (v.label.empty() || v.label.find_first_of(",\"\n\r") != std::string::npos) {
      throw InvalidArgument("sweep: variant label must be non-empty without commas, quotes or newlines");
    }
    for (Index m : cfg.m_grid) {
      TrialConfig t;
      t.d = cfg.d;
      t.redundancy = cfg.redundancy;
      t.k = cfg.k;
      t.m = m;
      t.variant = v;
      t.mode = cfg.mode;
      t.noise_level = cfg.noise_level;
      t.success_tol = cfg.success_tol;
      validate(t);
    }
  }
  if (cfg.mode == SupportMode::separated && cfg.k > 1 && cfg.d * cfg.redundancy / (2 * cfg.k) < 1) {
    throw InvalidArgument("sweep: k too large for the separation rule");
  }
}

std::vector<RecoveryCurve> run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const auto D = overcomplete_dft(cfg.d, cfg.redundancy);
  std::vector<PreparedVariant> prepared;
  prepared.reserve(cfg.variants.size());
  for (const auto& v : cfg.variants) prepared.emplace_back(D, v);

  const auto n_m = static_cast<std::int64_t>(cfg.m_grid.size());
  const std::int64_t n_jobs = n_m * cfg.trials;
  const std::size_t n_var = cfg.variants.size();
  // records[(job * n_var) + v]
  std::vector<TrialRecord> records(static_cast<std::size_t>(n_jobs) * n_var);
  std::string first_error;

#pragma omp parallel for schedule(dynamic) num_threads(kernels::num_threads())
  for (std::int64_t job = 0; job < n_jobs; ++job) {
    const Index m = cfg.m_grid[static_cast<std::size_t>(job / cfg.trials)];
    const auto trial = static_cast<std::uint64_t>(job % cfg.trials);
    try {
      const Instance inst = make_instance(D, cfg.k, m, cfg.mode, cfg.noise_level,
                                          derive_seed(cfg.base_seed, {trial}));
      for (std::size_t v = 0; v < n_var; ++v) {
        records[static_cast<std::size_t>(job) * n_var + v] = prepared[v].run(inst, cfg.k, cfg.success_tol);
      }
    } catch (const std::exception& ex) {
#pragma omp critical(sweep_error)
      if (first_error.empty()) first_error = ex.what();
    }
  }
  if (!first_error.empty()) throw Error("sweep trial failed: " + first_error);

  std::vector<RecoveryCurve> curves(n_var);
  for (std::size_t v = 0; v < n_var; ++v) {
    RecoveryCurve& c = curves[v];
    c.variant = cfg.variants[v].label;
    c.base_seed = cfg.base_seed;
    for (std::int64_t mi = 0; mi < n_m; ++mi) {
      std::int64_t successes = 0;
      double err = 0.0;
      double iters = 0.0;
      for (std::int64_t t = 0; t < cfg.trials; ++t) {
        const auto& r = records[static_cast<std::size_t>(mi * cfg.trials + t) * n_var + v];
        successes += r.success ? 1 : 0;
        err += r.relative_error;
        iters += r.iterations;
      }
      c.m.push_back(cfg.m_grid[static_cast<std::size_t>(mi)]);
      c.trials.push_back(cfg.trials);
      c.successes.push_back(successes);
      c.rate.push_back(static_cast<double>(successes) / static_cast<double>(cfg.trials));
      c.mean_rel_error.push_back(err / static_cast<double>(cfg.trials));
      c.mean_iters.push_back(iters / static_cast<double>(cfg.trials));
    }
  }
  return curves;
}

std::vector<std::size_t> monotonicity_alarms(const RecoveryCurve& curve, double drop) {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j < curve.rate.size(); ++j) {
    if (curve.rate[j] < curve.rate[j - 1] - drop) out.push_back(j);
  }
  return out;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RecoveryCurve>& curves) {
  out << kCsvHeader << '\n';
  for (const auto& c : curves) {
    for (std::size_t j = 0; j < c.m.size(); ++j) {
      out << c.variant << ',' << c.m[j] << ',' << c.trials[j] << ',' << c.successes[j] << ','
          << fmt17(c.rate[j]) << ',' << fmt17(c.mean_rel_error[j]) << ',' << fmt17(c.mean_iters[j])
          << '\n';
    }
  }
}

std::vector<RecoveryCurve> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw InvalidArgument("csv: bad header");
  std::vector<RecoveryCurve> curves;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw InvalidArgument("csv: line " + std::to_string(lineno) + " needs 7 fields");
    if (curves.empty() || curves.back().variant != f[0]) {
      curves.emplace_back();
      curves.back().variant = f[0];
    }
    RecoveryCurve& c = curves.back();
    try {
      c.m.push_back(std::stoll(f[1]));
      c.trials.push_back(std::stoll(f[2]));
      c.successes.push_back(std::stoll(f[3]));
      c.rate.push_back(std::stod(f[4]));
      c.mean_rel_error.push_back(std::stod(f[5]));
      c.mean_iters.push_back(std::stod(f[6]));
    } catch (const std::logic_error&) {
      throw InvalidArgument("csv: malformed number on line " + std::to_string(lineno));
    }
  }
  return curves;
}

void emit_outputs(const std::vector<RecoveryCurve>& curves, const std::filesystem::path& dir,
                  const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  {
    std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
    if (!csv) throw Error("cannot write " + (dir / (stem + ".csv")).string());
    write_csv(csv, curves);
    if (!csv) throw Error("write failed: " + (dir / (stem + ".csv")).string());
  }
  std::vector<plot::Series> series;
  for (const auto& c : curves) {
    plot::Series s;
    s.label = c.variant;
    for (std::size_t j = 0; j < c.m.size(); ++j) {
      s.x.push_back(static_cast<double>(c.m[j]));
      s.y.push_back(c.rate[j]);
    }
    series.push_back(std::move(s));
  }
  plot::ChartOptions opt;
  opt.title = "Recovery rate";
  opt.x_label = "m";
  opt.y_label = "rate";
  opt.y_min = 0.0;
  opt.y_max = 1.0;
  plot::write_svg(dir / (stem + ".svg"), plot::line_chart(series, opt));
}

template SparseSignal<Real> gen_sparse_signal<Real>(const Dictionary<Real>&, Index, SupportMode, std::uint64_t);
template SparseSignal<Complex> gen_sparse_signal<Complex>(const Dictionary<Complex>&, Index, SupportMode,
                                                          std::uint64_t);

}  // namespace sigspace
