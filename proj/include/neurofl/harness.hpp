#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "neurofl/config.hpp"
#include "neurofl/simulation.hpp"

namespace neurofl {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitRuntimeFault = 3,
  kExitIoError = 4,
};

struct RunResult {
  ControlMode mode = ControlMode::baseline;
  Trajectory trajectory;
  Metrics metrics;
};

/// Builds plants, controller, reference and disturbance from `cfg` and runs
/// the closed loop with the given controller mode (cfg.mode is ignored).
RunResult run_experiment(const ExperimentConfig& cfg, ControlMode mode);

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

/// Columns: t, x0..x{n-1}, xd0..xd{n-1}, u, s, d_hat, d_true, w_norm, event.
void write_csv(std::ostream& out, const Trajectory& traj);

nlohmann::json metrics_to_json(const RunResult& run);

/// |baseline steady-state error| / |compensated steady-state error|; 1 for 0/0.
double steady_state_ratio(const Metrics& baseline, const Metrics& compensated);

/// Output directory precedence: explicit override, config output.dir,
/// NEUROFL_OUT_DIR, then the working directory.
std::filesystem::path resolve_out_dir(const ExperimentConfig& cfg, const std::string& override_dir);

/// Writes <name>.csv and <name>.metrics.json, prints a metrics table.
int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& console);

/// Runs baseline and compensated on the same scenario and writes
/// <name>_baseline.csv, <name>_compensated.csv and <name>_compare.json.
int cmd_compare(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& console);

}  // namespace neurofl
