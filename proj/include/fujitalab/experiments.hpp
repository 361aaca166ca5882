#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace fujitalab {

struct Check {
  std::string name;
  bool pass;
  double value;
  double threshold;
};

struct ExperimentOutput {
  std::string experiment;
  bool pass = false;
  bool config_error = false;
  std::string error;
  std::vector<Check> checks;
  std::map<std::string, std::string> files;  // relative name -> contents
  nlohmann::json summary;
};

/// Known experiment ids, in `all` execution order.
const std::vector<std::string>& experiment_ids();

/// Built-in default configuration for an experiment id.
nlohmann::json default_config(const std::string& experiment);

/// Runs one experiment (or "all") purely in memory.
ExperimentOutput run_experiment(const nlohmann::json& config, std::uint64_t seed);

/// Runs and writes artifacts: every produced file plus manifest.json under
/// out_dir (atomically, temp-then-rename). Returns the process exit code:
/// 0 pass, 1 invariant failure, 2 config error.
int run_experiment_to_dir(const nlohmann::json& config, const std::string& out_dir,
                          std::uint64_t seed);

}  // namespace fujitalab
