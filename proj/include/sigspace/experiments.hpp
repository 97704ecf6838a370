#pragma once

// Monte-Carlo recovery-rate harness over the overcomplete DFT.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sigspace/recovery.hpp"

namespace sigspace {

enum class SupportMode { clustered, separated };
std::string to_string(SupportMode mode);
SupportMode parse_support_mode(const std::string& name);

template <class S>
struct SparseSignal {
  Vec<S> x;
  Vec<S> alpha;
  SupportSet support;
};

/// Clustered: a circular block of k consecutive atoms with a uniform start.
/// Separated: k atoms, uniform among placements whose circular gaps are all
/// >= floor(n / (2k)). Coefficients are standard (complex) Gaussian; x = D alpha
/// is scaled to unit norm together with alpha.
template <class S>
SparseSignal<S> gen_sparse_signal(const Dictionary<S>& D, Index k, SupportMode mode,
                                  std::uint64_t seed);

enum class VariantKind {
  sscosamp,
  /// Plain eps-OMP on M*D, with the eps-extension taken in D.
  eps_omp,
};

struct Variant {
  std::string label;
  VariantKind kind = VariantKind::sscosamp;
  SSCoSaMPConfig cfg;  ///< cfg.k is overwritten by the trial's k
  double eps = 0.0;    ///< eps_omp only
};

/// Named variants: sscosamp-threshold, sscosamp-eps-threshold, sscosamp-omp,
/// sscosamp-eps-omp, eps-omp.
Variant named_variant(const std::string& name, double eps = 0.31622776601683794);

struct TrialConfig {
  Index d = 256;
  Index redundancy = 4;
  Index k = 8;
  Index m = 64;
  Variant variant = named_variant("sscosamp-omp");
  SupportMode mode = SupportMode::clustered;
  /// |e| = noise_level * |M x| (zero: noiseless).
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  double success_tol = 1e-2;
};

void validate(const TrialConfig& cfg);

struct TrialRecord {
  std::uint64_t config_hash = 0;
  bool success = false;
  double relative_error = 0.0;
  int iterations = 0;
  double wall_time = 0.0;  ///< seconds; never written to CSV
};

std::uint64_t config_hash(const TrialConfig& cfg);

TrialRecord run_trial(const TrialConfig& cfg);

struct SweepConfig {
  Index d = 256;
  Index redundancy = 4;
  Index k = 8;
  SupportMode mode = SupportMode::clustered;
  std::vector<Index> m_grid;
  std::int64_t trials = 50;
  std::uint64_t base_seed = 0;
  double success_tol = 1e-2;
  double noise_level = 0.0;
  std::vector<Variant> variants;
};

void validate(const SweepConfig& cfg);

struct RecoveryCurve {
  std::string variant;
  std::vector<Index> m;
  std::vector<std::int64_t> trials;
  std::vector<std::int64_t> successes;
  std::vector<double> rate;
  std::vector<double> mean_rel_error;
  std::vector<double> mean_iters;
  std::uint64_t base_seed = 0;
};

/// Trial i at every m and in every variant draws its signal from
/// derive_seed(base_seed, {i}) and its measurement matrix from the same trial tag,
/// so variants are compared on identical (M, x, e). Jobs run on the kernel thread
/// pool; results do not depend on the thread count.
std::vector<RecoveryCurve> run_sweep(const SweepConfig& cfg);

/// Indices j where rate[j] < rate[j-1] - drop.
std::vector<std::size_t> monotonicity_alarms(const RecoveryCurve& curve, double drop = 0.3);

inline constexpr const char* kCsvHeader = "variant,m,trials,successes,rate,mean_rel_error,mean_iters";

void write_csv(std::ostream& out, const std::vector<RecoveryCurve>& curves);
std::vector<RecoveryCurve> read_csv(std::istream& in);

/// Writes <stem>.csv and <stem>.svg under dir.
void emit_outputs(const std::vector<RecoveryCurve>& curves, const std::filesystem::path& dir,
                  const std::string& stem = "sweep");

}  // namespace sigspace
