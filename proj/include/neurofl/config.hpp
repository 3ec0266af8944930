#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "neurofl/controller.hpp"
#include "neurofl/plants.hpp"
#include "neurofl/simulation.hpp"

namespace neurofl {

struct PlantConfig {
  std::string kind = "pendulum";
  std::map<std::string, double> params;  // every parameter of `kind`, defaults filled

  bool operator==(const PlantConfig&) const = default;
};

struct NetworkConfig {
  std::size_t neurons = 11;
  double s_range = 2.0;
  double eta = 20.0;
  double kappa = 0.0;
  std::optional<double> weight_cap;

  bool operator==(const NetworkConfig&) const = default;
};

struct OutputConfig {
  std::optional<std::string> dir;  // falls back to --out-dir, NEUROFL_OUT_DIR, then "."
  std::string name = "run";

  bool operator==(const OutputConfig&) const = default;
};

/// A fully validated experiment description. See docs/config.schema.json.
struct ExperimentConfig {
  PlantConfig plant;
  PlantConfig nominal;  // model used by the controller; same kind as `plant`
  DisturbanceSpec disturbance;
  ReferenceSpec reference;
  ControlMode mode = ControlMode::baseline;
  double lambda = 2.0;
  std::optional<double> u_limit;
  NetworkConfig network;
  std::vector<double> initial_state;
  double duration = 10.0;
  double dt_ctrl = 1e-3;
  std::size_t substeps = 1;
  OutputConfig output;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates JSON text. Throws ConfigError; parse errors carry
/// line and column, validation errors name the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form with every default spelled out.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Levenshtein distance, used for "did you mean" suggestions.
std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace neurofl
