#pragma once

// JSON-config driven subcommands behind the `sigspace` executable.
// Exit codes: 0 ok, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "sigspace/linalg.hpp"

namespace sigspace::cli {

/// Malformed or schema-violating configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

struct CliConfig {
  std::string subcommand;
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  bool quiet = false;
  int threads = 0;
};

/// Full entry point; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Each command reads its already-parsed JSON config. `out` receives the
/// machine-readable result; `err` diagnostics (suppressed by --quiet).
int cmd_recover(const nlohmann::json& config, const CliConfig& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const nlohmann::json& config, const CliConfig& opts, std::ostream& out, std::ostream& err);
int cmd_theory(const nlohmann::json& config, const CliConfig& opts, std::ostream& out, std::ostream& err);
int cmd_gram(const nlohmann::json& config, const CliConfig& opts, std::ostream& out, std::ostream& err);
int cmd_project(const nlohmann::json& config, const CliConfig& opts, std::ostream& out, std::ostream& err);

/// Reads a JSON file; ConfigError on I/O or syntax problems.
nlohmann::json load_config(const std::filesystem::path& path);

/// Thread count from --threads, falling back to SIGSPACE_THREADS, then 0 (auto).
int resolve_threads(std::optional<int> flag);

}  // namespace sigspace::cli
