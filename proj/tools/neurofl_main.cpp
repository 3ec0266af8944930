#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "neurofl/config.hpp"
#include "neurofl/errors.hpp"
#include "neurofl/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Feedback linearization with online RBF compensation: closed-loop experiments"};
  app.set_version_flag("--version", std::string("neurofl ") + neurofl::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  auto* simulate = app.add_subcommand("simulate", "Run one experiment and write its trajectory CSV and metrics");
  simulate->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  simulate->add_option("--out-dir", out_dir, "Output directory (default: config output.dir, $NEUROFL_OUT_DIR, .)");

  auto* compare = app.add_subcommand("compare", "Run baseline and compensated controllers on the same scenario");
  compare->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  compare->add_option("--out-dir", out_dir, "Output directory (default: config output.dir, $NEUROFL_OUT_DIR, .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return neurofl::kExitConfigError;
  }

  // A config that cannot be opened is an I/O problem, not a bad config.
  if (!std::ifstream(config_path)) {
    std::cerr << "cannot read config file '" << config_path << "'\n";
    return neurofl::kExitIoError;
  }

  neurofl::ExperimentConfig cfg;
  try {
    cfg = neurofl::load_config(config_path);
  } catch (const neurofl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return neurofl::kExitConfigError;
  }

  const auto dir = neurofl::resolve_out_dir(cfg, out_dir);
  if (simulate->parsed()) return neurofl::cmd_simulate(cfg, dir, std::cout);
  return neurofl::cmd_compare(cfg, dir, std::cout);
}
