#include "sigspace/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "sigspace/container_io.hpp"
#include "sigspace/experiments.hpp"
#include "sigspace/kernels.hpp"
#include "sigspace/plot.hpp"
#include "sigspace/recovery.hpp"
#include "sigspace/rng.hpp"
#include "sigspace/theory.hpp"

namespace sigspace::cli {

using nlohmann::json;

namespace {

// ---- strict schema helpers --------------------------------------------------

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double get_real(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

double get_real(const json& j, const char* key, double def, const std::string& where) {
  return j.contains(key) ? get_real(j, key, where) : def;
}

std::int64_t get_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw ConfigError(where + "." + key + ": integer out of range");
  }
  return v.get<std::int64_t>();
}

std::int64_t get_int(const json& j, const char* key, std::int64_t def, const std::string& where) {
  return j.contains(key) ? get_int(j, key, where) : def;
}

std::uint64_t get_seed(const json& j, const CliConfig& opts, const std::string& where) {
  if (opts.seed) return *opts.seed;
  if (!j.contains("seed")) return 0;
  const json& v = j.at("seed");
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(where + ".seed: expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const char* key, const std::string& def, const std::string& where) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const char* key, bool def, const std::string& where) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
  return j.at(key).get<bool>();
}

std::filesystem::path get_path(const json& j, const char* key, const CliConfig& opts, const std::string& where) {
  const std::string p = get_string(j, key, "", where);
  if (p.empty()) throw ConfigError(where + ": missing '" + key + "'");
  std::filesystem::path path(p);
  // Relative paths resolve against the config file's directory.
  if (path.is_relative() && !opts.config_path.empty()) path = opts.config_path.parent_path() / path;
  return path;
}

bool wants_complex(const json& config, const std::string& where) {
  const std::string scalar = get_string(config, "scalar", "complex", where);
  if (scalar == "complex") return true;
  if (scalar == "real") return false;
  throw ConfigError(where + ".scalar: expected 'real' or 'complex'");
}

SelectionScheme parse_scheme(const json& j, const std::string& where) {
  if (j.is_string()) {
    SelectionScheme s;
    s.kind = parse_scheme_kind(j.get<std::string>());
    return s;
  }
  check_keys(j, {"kind", "eps", "cosamp_max_iters", "cosamp_tol", "iht_max_iters", "iht_step"}, where);
  SelectionScheme s;
  s.kind = parse_scheme_kind(get_string(j, "kind", "", where));
  s.eps = get_real(j, "eps", s.eps, where);
  s.cosamp_max_iters = static_cast<int>(get_int(j, "cosamp_max_iters", s.cosamp_max_iters, where));
  s.cosamp_tol = get_real(j, "cosamp_tol", s.cosamp_tol, where);
  s.iht_max_iters = static_cast<int>(get_int(j, "iht_max_iters", s.iht_max_iters, where));
  s.iht_step = get_real(j, "iht_step", s.iht_step, where);
  validate(s);
  return s;
}

HaltingRule parse_halting(const json& j, const std::string& where) {
  check_keys(j, {"max_iters", "residual_tol", "stagnation_tol", "stagnation_window"}, where);
  HaltingRule h;
  h.max_iters = static_cast<int>(get_int(j, "max_iters", h.max_iters, where));
  h.residual_tol = get_real(j, "residual_tol", h.residual_tol, where);
  h.stagnation_tol = get_real(j, "stagnation_tol", h.stagnation_tol, where);
  h.stagnation_window = static_cast<int>(get_int(j, "stagnation_window", h.stagnation_window, where));
  return h;
}

// Dictionary from {"kind": identity | random_orthogonal | overcomplete_dft | gaussian | file, ...}.
template <class S>
Dictionary<S> build_dictionary(const json& j, std::uint64_t seed, const CliConfig& opts) {
  const std::string where = "dictionary";
  require_object(j, where);
  const std::string kind = get_string(j, "kind", "", where);
  if (kind == "identity") {
    check_keys(j, {"kind", "d"}, where);
    return identity_dictionary<S>(get_int(j, "d", where));
  }
  if (kind == "random_orthogonal") {
    check_keys(j, {"kind", "d"}, where);
    return random_orthogonal<S>(get_int(j, "d", where), derive_seed(seed, {4}));
  }
  if (kind == "overcomplete_dft") {
    check_keys(j, {"kind", "d", "redundancy"}, where);
    if constexpr (is_complex_v<S>) {
      return overcomplete_dft(get_int(j, "d", where), get_int(j, "redundancy", 4, where));
    } else {
      throw ConfigError("dictionary: overcomplete_dft needs scalar 'complex'");
    }
  }
  if (kind == "gaussian") {
    check_keys(j, {"kind", "d", "n"}, where);
    const Index d = get_int(j, "d", where);
    const Index n = get_int(j, "n", where);
    if (d < 1 || n < 1) throw ConfigError("dictionary: d and n must be positive");
    Mat<S> A = gaussian_matrix<S>(d, n, derive_seed(seed, {4}), 1.0, is_complex_v<S>);
    A.colwise().normalize();
    return Dictionary<S>(std::move(A), DictionaryKind::custom, 1);
  }
  if (kind == "file") {
    check_keys(j, {"kind", "path"}, where);
    return load_dictionary<S>(get_path(j, "path", opts, where));
  }
  throw ConfigError("dictionary.kind: unknown kind '" + kind + "'");
}

template <class S>
Vec<S> parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  Vec<S> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (e.is_number()) {
      v(static_cast<Index>(i)) = S(e.get<double>());
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      if constexpr (is_complex_v<S>) {
        v(static_cast<Index>(i)) = S(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError(where + ": complex entry in a real vector");
      }
    } else {
      throw ConfigError(where + ": entries must be numbers or [re, im] pairs");
    }
  }
  return v;
}

template <class S>
Vec<S> load_column(const std::filesystem::path& path) {
  const Mat<S> m = load_matrix<S>(path);
  if (m.cols() != 1) throw DimensionError(path.string() + ": expected a single column");
  return m.col(0);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

std::filesystem::path ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

// ---- recover ----------------------------------------------------------------

template <class S>
int recover_impl(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  const std::string where = "recover";
  const std::uint64_t seed = get_seed(config, opts, where);
  if (!config.contains("dictionary")) throw ConfigError("recover: missing 'dictionary'");
  const Dictionary<S> D = build_dictionary<S>(config.at("dictionary"), seed, opts);

  SSCoSaMPConfig cfg;
  cfg.k = get_int(config, "k", where);
  cfg.a = get_int(config, "a", cfg.a, where);
  cfg.scheme_expand = config.contains("expand") ? parse_scheme(config.at("expand"), where + ".expand")
                                                : SelectionScheme{};
  cfg.scheme_shrink = config.contains("shrink") ? parse_scheme(config.at("shrink"), where + ".shrink")
                                                : cfg.scheme_expand;
  if (config.contains("halting")) cfg.halting = parse_halting(config.at("halting"), where + ".halting");
  validate(cfg);

  if (!config.contains("measurement")) throw ConfigError("recover: missing 'measurement'");
  const json& mj = config.at("measurement");
  require_object(mj, "measurement");
  MeasurementModel<S> M;
  const std::string mkind = get_string(mj, "kind", "gaussian", "measurement");
  if (mkind == "gaussian") {
    check_keys(mj, {"kind", "m", "complex_entries"}, "measurement");
    const Index m = get_int(mj, "m", "measurement");
    if (m < 1) throw ConfigError("measurement.m must be positive");
    M = gaussian_measurements<S>(m, D.dim(), derive_seed(seed, {2}),
                                 get_bool(mj, "complex_entries", false, "measurement"));
  } else if (mkind == "file") {
    check_keys(mj, {"kind", "path"}, "measurement");
    M.matrix = load_matrix<S>(get_path(mj, "path", opts, "measurement"));
  } else {
    throw ConfigError("measurement.kind: unknown kind '" + mkind + "'");
  }
  if (!M.compressive() && !opts.quiet) err << "warning: m > d, measurements are not compressive\n";

  if (!config.contains("signal")) throw ConfigError("recover: missing 'signal'");
  const json& sj = config.at("signal");
  require_object(sj, "signal");
  const std::string skind = get_string(sj, "kind", "synthetic", "signal");
  Vec<S> y;
  std::optional<Vec<S>> truth;
  if (skind == "synthetic") {
    check_keys(sj, {"kind", "k", "mode", "noise_level"}, "signal");
    const Index k = get_int(sj, "k", cfg.k, "signal");
    const auto mode = parse_support_mode(get_string(sj, "mode", "clustered", "signal"));
    const double noise = get_real(sj, "noise_level", 0.0, "signal");
    if (!(noise >= 0.0)) throw ConfigError("signal.noise_level must be non-negative");
    if (M.cols() != D.dim()) throw DimensionError("cols(M) != signal dimension");
    const auto sig = gen_sparse_signal<S>(D, k, mode, derive_seed(seed, {1}));
    truth = sig.x;
    y = M.matrix * sig.x;
    if (noise > 0.0) {
      RandomStream rng(derive_seed(seed, {3}));
      Vec<S> e(y.size());
      for (Index i = 0; i < e.size(); ++i) {
        if constexpr (is_complex_v<S>) e(i) = S(rng.normal(), rng.normal());
        else e(i) = rng.normal();
      }
      e *= noise * y.norm() / std::max(e.norm(), 1e-300);
      M.noise_bound = e.norm();
      y += e;
    }
  } else if (skind == "file") {
    check_keys(sj, {"kind", "y", "x"}, "signal");
    y = load_column<S>(get_path(sj, "y", opts, "signal"));
    if (sj.contains("x")) truth = load_column<S>(get_path(sj, "x", opts, "signal"));
  } else if (skind == "inline") {
    check_keys(sj, {"kind", "y", "x"}, "signal");
    y = parse_vector<S>(sj.at("y"), "signal.y");
    if (sj.contains("x")) truth = parse_vector<S>(sj.at("x"), "signal.x");
  } else {
    throw ConfigError("signal.kind: unknown kind '" + skind + "'");
  }

  const bool include_estimate = get_bool(config, "include_estimate", false, where);
  const auto report = sscosamp<S>(y, M, D, cfg, truth ? &*truth : nullptr);
  json j = to_json(report, include_estimate);
  j["seed"] = seed;
  if (truth) {
    const double tn = truth->norm();
    j["relative_error"] = (report.estimate - *truth).norm() / (tn > 0.0 ? tn : 1.0);
  }
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (opts.out_dir) write_text(ensure_out_dir(*opts.out_dir) / "recover.json", text);
  return kOk;
}

// ---- sweep ------------------------------------------------------------------

Variant parse_variant(const json& j, double default_eps, const std::string& where) {
  if (j.is_string()) return named_variant(j.get<std::string>(), default_eps);
  check_keys(j, {"label", "kind", "expand", "shrink", "a", "halting", "eps"}, where);
  Variant v;
  v.label = get_string(j, "label", "", where);
  if (v.label.empty()) throw ConfigError(where + ": missing 'label'");
  const std::string kind = get_string(j, "kind", "sscosamp", where);
  if (kind == "eps-omp") {
    v.kind = VariantKind::eps_omp;
    v.eps = get_real(j, "eps", default_eps, where);
    return v;
  }
  if (kind != "sscosamp") throw ConfigError(where + ".kind: expected 'sscosamp' or 'eps-omp'");
  if (!j.contains("expand")) throw ConfigError(where + ": missing 'expand'");
  v.cfg.scheme_expand = parse_scheme(j.at("expand"), where + ".expand");
  v.cfg.scheme_shrink = j.contains("shrink") ? parse_scheme(j.at("shrink"), where + ".shrink")
                                             : v.cfg.scheme_expand;
  v.cfg.a = get_int(j, "a", v.cfg.a, where);
  if (j.contains("halting")) v.cfg.halting = parse_halting(j.at("halting"), where + ".halting");
  return v;
}

// ---- theory -----------------------------------------------------------------

json failure_json(const theory::ConditionFailure& f, double C_k, double Ct, double gamma) {
  json j{{"condition_failure", f.reason}, {"C_k", C_k}, {"Ctilde_2k", Ct}, {"gamma", gamma}};
  j["condition"] = theory::condition_check(C_k, Ct, gamma);
  const auto eps = theory::epsilon_threshold(C_k, Ct, gamma);
  j["epsilon_sq"] = eps ? json(*eps) : json(nullptr);
  return j;
}

}  // namespace

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

int resolve_threads(std::optional<int> flag) {
  if (flag) {
    if (*flag < 0) throw ConfigError("--threads must be non-negative");
    return *flag;
  }
  if (const char* env = std::getenv("SIGSPACE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) throw ConfigError("SIGSPACE_THREADS must be a non-negative integer");
    return static_cast<int>(v);
  }
  return 0;
}

int recover_body(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  check_keys(config, {"seed", "scalar", "dictionary", "measurement", "signal", "k", "a", "expand",
                      "shrink", "halting", "include_estimate"},
             "recover");
  return wants_complex(config, "recover") ? recover_impl<Complex>(config, opts, out, err)
                                          : recover_impl<Real>(config, opts, out, err);
}

int sweep_body(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  const std::string where = "sweep";
  check_keys(config, {"seed", "d", "redundancy", "k", "mode", "m_grid", "trials", "success_tol",
                      "noise_level", "eps", "variants", "stem"},
             where);
  SweepConfig cfg;
  cfg.base_seed = get_seed(config, opts, where);
  cfg.d = get_int(config, "d", cfg.d, where);
  cfg.redundancy = get_int(config, "redundancy", cfg.redundancy, where);
  cfg.k = get_int(config, "k", cfg.k, where);
  cfg.mode = parse_support_mode(get_string(config, "mode", "clustered", where));
  cfg.trials = get_int(config, "trials", cfg.trials, where);
  cfg.success_tol = get_real(config, "success_tol", cfg.success_tol, where);
  cfg.noise_level = get_real(config, "noise_level", cfg.noise_level, where);
  const double eps = get_real(config, "eps", std::sqrt(0.1), where);
  if (!config.contains("m_grid") || !config.at("m_grid").is_array()) {
    throw ConfigError("sweep: 'm_grid' must be an array");
  }
  for (const auto& m : config.at("m_grid")) {
    if (!m.is_number_integer()) throw ConfigError("sweep.m_grid: expected integers");
    cfg.m_grid.push_back(m.get<Index>());
  }
  if (!config.contains("variants") || !config.at("variants").is_array()) {
    throw ConfigError("sweep: 'variants' must be an array");
  }
  for (std::size_t i = 0; i < config.at("variants").size(); ++i) {
    cfg.variants.push_back(parse_variant(config.at("variants")[i], eps, where + ".variants[" + std::to_string(i) + "]"));
  }
  validate(cfg);
  const std::string stem = get_string(config, "stem", "sweep", where);
  if (opts.out_dir) ensure_out_dir(*opts.out_dir);  // fail before the long run

  const auto curves = run_sweep(cfg);
  for (const auto& c : curves) {
    for (std::size_t j : monotonicity_alarms(c)) {
      if (!opts.quiet) {
        err << "alarm: " << c.variant << " rate drops from " << c.rate[j - 1] << " to " << c.rate[j]
            << " between m=" << c.m[j - 1] << " and m=" << c.m[j] << "\n";
      }
    }
  }
  write_csv(out, curves);
  if (opts.out_dir) {
    emit_outputs(curves, *opts.out_dir, stem);
    if (!opts.quiet) err << "wrote " << (*opts.out_dir / (stem + ".csv")).string() << " and .svg\n";
  }
  return kOk;
}

int theory_body(const json& config, const CliConfig& opts, std::ostream& out, std::ostream&) {
  const std::string where = "theory";
  check_keys(config, {"seed", "C_k", "Ctilde_2k", "gamma", "zeta", "delta", "deltas", "chain",
                      "x_norm", "e_norm", "max_iters"},
             where);
  const double gamma = get_real(config, "gamma", 0.01, where);
  const double zeta = get_real(config, "zeta", 1.0, where);
  double C_k = 1.0;
  double Ct = 1.0;
  theory::DeltaTriple deltas;
  const double delta = get_real(config, "delta", 0.0, where);
  deltas = {delta, delta, delta};
  if (config.contains("chain")) {
    // C_k from representation CoSaMP, C~ from thresholding, both at one RIP level.
    const json& c = config.at("chain");
    check_keys(c, {"delta"}, where + ".chain");
    const double d = get_real(c, "delta", where + ".chain");
    C_k = theory::ck_bound_cosamp_exact(d, d, d);
    Ct = theory::ctilde_bound_threshold(d);
    if (!config.contains("delta")) deltas = {d, d, d};
  }
  C_k = get_real(config, "C_k", C_k, where);
  Ct = get_real(config, "Ctilde_2k", Ct, where);
  if (config.contains("deltas")) {
    const json& dj = config.at("deltas");
    check_keys(dj, {"zeta_plus_1", "three_zeta", "three_zeta_plus_1"}, where + ".deltas");
    deltas.zeta_plus_1 = get_real(dj, "zeta_plus_1", deltas.zeta_plus_1, where);
    deltas.three_zeta = get_real(dj, "three_zeta", deltas.three_zeta, where);
    deltas.three_zeta_plus_1 = get_real(dj, "three_zeta_plus_1", deltas.three_zeta_plus_1, where);
  }
  const auto result = theory::convergence_constants(deltas, C_k, Ct, gamma, zeta);
  json j;
  if (const auto* f = std::get_if<theory::ConditionFailure>(&result)) {
    j = failure_json(*f, C_k, Ct, gamma);
  } else {
    auto tc = std::get<theory::TheoryConstants>(result);
    if (config.contains("x_norm") && tc.rho < 1.0) {
      const auto budget = theory::error_budget(
          tc.rho, tc.eta, get_real(config, "x_norm", where), get_real(config, "e_norm", 0.0, where),
          static_cast<std::uint64_t>(get_int(config, "max_iters", 50, where)));
      tc.t_star = budget.t_star;
      tc.eta0 = budget.eta0;
    }
    j = theory::to_json(tc);
  }
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (opts.out_dir) write_text(ensure_out_dir(*opts.out_dir) / "theory.json", text);
  return kOk;
}

int gram_body(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  const std::string where = "gram";
  check_keys(config, {"seed", "scalar", "dictionary", "atom", "stem"}, where);
  const std::uint64_t seed = get_seed(config, opts, where);
  if (!config.contains("dictionary")) throw ConfigError("gram: missing 'dictionary'");
  const Index atom = get_int(config, "atom", 0, where);
  RealVec profile;
  if (wants_complex(config, where)) {
    const auto D = build_dictionary<Complex>(config.at("dictionary"), seed, opts);
    if (atom < 0 || atom >= D.size()) throw ConfigError("gram.atom out of range");
    profile = gram_profile(D, atom);
  } else {
    const auto D = build_dictionary<Real>(config.at("dictionary"), seed, opts);
    if (atom < 0 || atom >= D.size()) throw ConfigError("gram.atom out of range");
    profile = gram_profile(D, atom);
  }
  std::ostringstream csv;
  csv << "rank,correlation\n";
  char buf[40];
  for (Index i = 0; i < profile.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", profile(i));
    csv << (i + 1) << ',' << buf << '\n';
  }
  out << csv.str();
  if (opts.out_dir) {
    const auto dir = ensure_out_dir(*opts.out_dir);
    const std::string stem = get_string(config, "stem", "gram", where);
    write_text(dir / (stem + ".csv"), csv.str());
    plot::Series s;
    s.label = "atom " + std::to_string(atom);
    for (Index i = 0; i < profile.size(); ++i) {
      s.x.push_back(static_cast<double>(i + 1));
      s.y.push_back(profile(i));
    }
    plot::ChartOptions o;
    o.title = "Sorted atom correlations";
    o.x_label = "rank (log scale)";
    o.y_label = "|<d_i, d_j>|";
    o.log_x = true;
    o.y_min = 0.0;
    o.y_max = 1.0;
    plot::write_svg(dir / (stem + ".svg"), plot::line_chart({s}, o));
    if (!opts.quiet) err << "wrote " << (dir / (stem + ".csv")).string() << " and .svg\n";
  }
  return kOk;
}

namespace {

template <class S>
int project_impl(const json& config, const CliConfig& opts, std::ostream& out) {
  const std::string where = "project";
  const std::uint64_t seed = get_seed(config, opts, where);
  if (!config.contains("dictionary")) throw ConfigError("project: missing 'dictionary'");
  if (!config.contains("scheme")) throw ConfigError("project: missing 'scheme'");
  const SelectionScheme scheme = parse_scheme(config.at("scheme"), where + ".scheme");
  const auto D = build_dictionary<S>(config.at("dictionary"), seed, opts);
  const Index k = get_int(config, "k", where);
  Vec<S> z;
  if (config.contains("z")) {
    z = parse_vector<S>(config.at("z"), "project.z");
  } else if (config.contains("z_path")) {
    z = load_column<S>(get_path(config, "z_path", opts, where));
  } else {
    RandomStream rng(derive_seed(seed, {5}));
    z.resize(D.dim());
    for (Index i = 0; i < z.size(); ++i) {
      if constexpr (is_complex_v<S>) z(i) = S(rng.normal(), rng.normal());
      else z(i) = rng.normal();
    }
  }
  if (z.size() != D.dim()) throw DimensionError("project: length of z != d");
  const SupportSet T = select(D, scheme, z, k);
  json j{{"scheme", to_string(scheme.kind)},
         {"k", k},
         {"universe", T.universe()},
         {"support", T.indices()},
         {"residual_norm", coproject<S>(D.matrix(), T, z).norm()}};
  out << j.dump(2) << "\n";
  if (opts.out_dir) write_text(ensure_out_dir(*opts.out_dir) / "project.json", j.dump(2) + "\n");
  return kOk;
}

}  // namespace

int project_body(const json& config, const CliConfig& opts, std::ostream& out, std::ostream&) {
  check_keys(config, {"seed", "scalar", "dictionary", "scheme", "k", "z", "z_path"}, "project");
  return wants_complex(config, "project") ? project_impl<Complex>(config, opts, out)
                                          : project_impl<Real>(config, opts, out);
}

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace

int cmd_recover(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return recover_body(config, opts, out, err); });
}

int cmd_sweep(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return sweep_body(config, opts, out, err); });
}

int cmd_theory(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return theory_body(config, opts, out, err); });
}

int cmd_gram(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return gram_body(config, opts, out, err); });
}

int cmd_project(const json& config, const CliConfig& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return project_body(config, opts, out, err); });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"sigspace: signal space CoSaMP toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool quiet = false;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--quiet", quiet, "machine-readable stdout only, no diagnostics");
  app.add_option("--threads", threads, "worker threads (0 = auto; env SIGSPACE_THREADS)");
  app.add_subcommand("recover", "run SSCoSaMP on one measurement vector");
  app.add_subcommand("sweep", "Monte-Carlo recovery rates over a grid of m");
  app.add_subcommand("theory", "convergence constants and condition check");
  app.add_subcommand("gram", "sorted correlation profile of one atom");
  app.add_subcommand("project", "apply one selection scheme to a vector");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  CliConfig opts;
  opts.subcommand = app.get_subcommands().front()->get_name();
  opts.config_path = config_path;
  opts.seed = seed;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.quiet = quiet;

  return guarded(err, [&] {
    opts.threads = resolve_threads(threads);
    kernels::set_num_threads(opts.threads);
    const json config = load_config(opts.config_path);
    if (opts.subcommand == "recover") return recover_body(config, opts, out, err);
    if (opts.subcommand == "sweep") return sweep_body(config, opts, out, err);
    if (opts.subcommand == "theory") return theory_body(config, opts, out, err);
    if (opts.subcommand == "gram") return gram_body(config, opts, out, err);
    return project_body(config, opts, out, err);
  });
}

}  // namespace sigspace::cli
