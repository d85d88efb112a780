#include <CLI11.hpp>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "anderson/config.hpp"
#include "anderson/parallel.hpp"
#include "anderson/runner.hpp"

namespace {

int workers_from_env() {
  const char* env = std::getenv("ANDERSON_MP_THREADS");
  if (env == nullptr || *env == '\0') return 0;  // hardware default
  try {
    const int v = std::stoi(env);
    return v > 0 ? v : 0;
  } catch (...) {
    std::cerr << "anderson_mp: ignoring unparsable ANDERSON_MP_THREADS='" << env
              << "'\n";
    return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-box multi-particle Anderson model toolkit"};

  std::string subcommand;
  std::string config_path;
  std::string seed;
  std::string out_dir;
  std::vector<std::string> overrides;

  app.add_option("subcommand", subcommand,
                 "one of: spectrum, ids, fit, compare, weyl, edge")
      ->required();
  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--seed", seed, "override disorder.seed");
  app.add_option("--set", overrides, "override a config key, key=value")
      ->take_all();
  app.add_option("--out", out_dir, "override output.dir");

  CLI11_PARSE(app, argc, argv);

  if (!seed.empty()) overrides.push_back("disorder.seed=" + seed);
  if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);

  try {
    const anderson::ExperimentConfig cfg =
        anderson::load_config(config_path, overrides);
    anderson::run_subcommand(cfg, subcommand, workers_from_env());
    std::cout << anderson::output_path(cfg, subcommand) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "anderson_mp " << subcommand << ": " << e.what() << "\n";
    return 1;
  }
}
