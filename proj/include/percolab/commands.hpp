#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "percolab/io.hpp"

namespace percolab {

enum ExitCode : int { kExitPass = 0, kExitScientificFailure = 1, kExitUsage = 2 };

/// Every flag of the command line. Unset optionals take per-command defaults.
struct RunConfig {
  std::string command;
  std::optional<std::string> lattice;
  std::optional<int> radius;
  std::optional<std::vector<double>> p;
  std::optional<std::vector<double>> h;
  std::optional<std::size_t> n_min;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> n_step;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> cap;
  std::uint64_t seed = 20240901;
  unsigned threads = 1;
  std::filesystem::path out = "out";
  std::optional<double> q_override;
  std::string mode = "exact";  // verify-theorem12: exact | mc
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-lemmas", "verify-theorem12", "decay", "meanfield",
                                                 "couple-demo"};
  return names;
}

/// Canonical parameter JSON (defaults resolved), as recorded in the manifest.
[[nodiscard]] Json resolved_params(const RunConfig& config);

/// Overlay a JSON object (flag names as keys, or a manifest whose "params" holds them) on `config`.
void apply_config_json(RunConfig& config, const Json& j);

/// Parses "0.2,0.5,0.8" (empty string -> empty list).
[[nodiscard]] std::vector<double> parse_list(const std::string& text);

/// Runs the command, writes outputs and manifest.json into config.out, returns the exit code.
/// Usage and cap errors are reported on `log` and mapped to kExitUsage.
int run_command(const RunConfig& config, std::ostream& log);

}  // namespace percolab
