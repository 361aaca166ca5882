#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fujitalab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fujitalab - numerical experiments for semilinear heat flow on model spaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  std::vector<std::string> ids = fujitalab::experiment_ids();
  ids.push_back("all");
  for (const auto& id : ids) {
    CLI::App* sub = app.add_subcommand(id, "run the " + id + " experiment");
    sub->add_option("--config", config_path, "JSON config file (defaults built in)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "deterministic seed");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string chosen = app.get_subcommands().front()->get_name();

  nlohmann::json config;
  if (config_path.empty()) {
    config = fujitalab::default_config(chosen);
  } else {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return 2;
    }
    try {
      is >> config;
    } catch (const std::exception& e) {
      std::cerr << "error: invalid JSON config: " << e.what() << "\n";
      return 2;
    }
    if (!config.contains("experiment")) config["experiment"] = chosen;
    if (config["experiment"] != chosen) {
      std::cerr << "error: config is for experiment " << config["experiment"]
                << ", invoked subcommand " << chosen << "\n";
      return 2;
    }
  }

  int rc;
  try {
    rc = fujitalab::run_experiment_to_dir(config, out_dir, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (rc == 0)
    std::cout << chosen << ": pass (artifacts in " << out_dir << ")\n";
  else if (rc == 1)
    std::cout << chosen << ": FAIL (see " << out_dir << "/manifest.json)\n";
  else
    std::cerr << chosen << ": config error\n";
  return rc;
}
