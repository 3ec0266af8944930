#include "neurofl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "neurofl/errors.hpp"

namespace neurofl {

using nlohmann::json;

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

// Reads one JSON object in strict mode: unknown keys are rejected up front.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, const std::vector<std::string>& known)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be a JSON object");
    for (const auto& [key, value] : j_.items()) {
      if (std::find(known.begin(), known.end(), key) != known.end()) continue;
      std::string msg = "unknown key '" + key + "'";
      std::string best;
      std::size_t best_dist = std::numeric_limits<std::size_t>::max();
      for (const auto& candidate : known) {
        const std::size_t dist = edit_distance(key, candidate);
        if (dist < best_dist) {
          best_dist = dist;
          best = candidate;
        }
      }
      if (best_dist <= 2) msg += " (did you mean '" + best + "'?)";
      throw ConfigError(key_path(key), msg);
    }
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& at(const std::string& key) const { return j_.at(key); }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(key_path(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key_path(key), "must be finite");
    return d;
  }

  std::optional<double> optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(key_path(key), "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key), "must be a string");
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
};

const json& object_or_empty(const ObjectReader& r, const std::string& key) {
  static const json empty = json::object();
  return r.has(key) ? r.at(key) : empty;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

std::string kind_of(const json& j, const std::string& path, const std::string& fallback) {
  if (!j.is_object() || !j.contains("kind")) return fallback;
  require(j.at("kind").is_string(), path + ".kind", "must be a string");
  return j.at("kind").get<std::string>();
}

std::vector<std::string> with_kind(const std::map<std::string, double>& params) {
  std::vector<std::string> keys{"kind"};
  for (const auto& [name, value] : params) keys.push_back(name);
  return keys;
}

PlantConfig read_plant(const json& j, const std::string& path, const std::optional<PlantConfig>& base) {
  // A nominal plant block inherits kind and parameters from the truth plant.
  const std::string kind = kind_of(j, path, base ? base->kind : "pendulum");

  const std::map<std::string, double>* defaults = nullptr;
  try {
    defaults = &plant_parameter_defaults(kind);
  } catch (const DomainError&) {
    throw ConfigError(path + ".kind", "unknown plant kind '" + kind + "' (expected pendulum, duffing or vanderpol)");
  }
  ObjectReader r(j, path, with_kind(*defaults));
  if (base) require(kind == base->kind, path + ".kind", "must match the plant kind '" + base->kind + "'");

  PlantConfig out;
  out.kind = kind;
  out.params = base ? base->params : *defaults;
  for (const auto& [name, value] : *defaults) out.params[name] = r.number(name, out.params[name]);
  try {
    (void)make_plant(out.kind, out.params);
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  return out;
}

DisturbanceSpec read_disturbance(const json& j, double dt_ctrl, std::uint64_t seed) {
  const std::string path = "disturbance";
  const std::string kind_name = kind_of(j, path, "none");

  DisturbanceKind kind{};
  try {
    kind = disturbance_kind_from_string(kind_name);
  } catch (const DomainError&) {
    throw ConfigError(path + ".kind",
                      "unknown disturbance kind '" + kind_name + "' (expected none, constant, sinusoid or band_limited_noise)");
  }

  DisturbanceSpec spec;
  switch (kind) {
    case DisturbanceKind::none: {
      ObjectReader r(j, path, {"kind"});
      spec = DisturbanceSpec::none();
      break;
    }
    case DisturbanceKind::constant: {
      ObjectReader r(j, path, {"kind", "offset", "bound"});
      spec = DisturbanceSpec::constant(r.number("offset", 0.0));
      spec.bound = r.number("bound", spec.bound);
      break;
    }
    case DisturbanceKind::sinusoid: {
      ObjectReader r(j, path, {"kind", "amplitude", "frequency", "phase", "bound"});
      spec = DisturbanceSpec::sinusoid(r.number("amplitude", 1.0), r.number("frequency", 1.0), r.number("phase", 0.0));
      spec.bound = r.number("bound", spec.bound);
      break;
    }
    case DisturbanceKind::band_limited_noise: {
      ObjectReader r(j, path, {"kind", "amplitude", "cutoff", "seed", "sample_dt", "bound"});
      spec = DisturbanceSpec::noise(r.number("amplitude", 1.0), r.number("cutoff", 1.0), r.unsigned_integer("seed", seed),
                                    r.number("sample_dt", dt_ctrl));
      spec.bound = r.number("bound", spec.bound);
      break;
    }
  }
  try {
    validate(spec);
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  return spec;
}

SinusoidComponent read_component(const json& j, const std::string& path) {
  ObjectReader r(j, path, {"amplitude", "omega", "phase"});
  return {r.number("amplitude", 1.0), r.number("omega", 1.0), r.number("phase", 0.0)};
}

ReferenceSpec read_reference(const json& j, std::size_t order) {
  const std::string path = "reference";
  const std::string kind_name = kind_of(j, path, "constant");

  ReferenceKind kind{};
  try {
    kind = reference_kind_from_string(kind_name);
  } catch (const DomainError&) {
    throw ConfigError(path + ".kind",
                      "unknown reference kind '" + kind_name + "' (expected constant, sinusoid or sum_of_sinusoids)");
  }
  switch (kind) {
    case ReferenceKind::constant: {
      ObjectReader r(j, path, {"kind", "level"});
      return ReferenceSpec::constant(r.number("level", 0.0), order);
    }
    case ReferenceKind::sinusoid: {
      ObjectReader r(j, path, {"kind", "amplitude", "omega", "phase"});
      return ReferenceSpec::sinusoid(r.number("amplitude", 1.0), r.number("omega", 1.0), r.number("phase", 0.0), order);
    }
    case ReferenceKind::sum_of_sinusoids: {
      ObjectReader r(j, path, {"kind", "components"});
      require(r.has("components") && r.at("components").is_array() && !r.at("components").empty(),
              path + ".components", "must be a non-empty array of {amplitude, omega, phase}");
      std::vector<SinusoidComponent> comps;
      const json& arr = r.at("components");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        comps.push_back(read_component(arr[i], path + ".components[" + std::to_string(i) + "]"));
      }
      return ReferenceSpec::sum_of_sinusoids(std::move(comps), order);
    }
  }
  return ReferenceSpec::constant(0.0, order);
}

NetworkConfig read_network(const json& j) {
  ObjectReader r(j, "network", {"neurons", "s_range", "eta", "kappa", "weight_cap"});
  NetworkConfig n;
  n.neurons = r.unsigned_integer("neurons", n.neurons);
  n.s_range = r.number("s_range", n.s_range);
  n.eta = r.number("eta", n.eta);
  n.kappa = r.number("kappa", n.kappa);
  n.weight_cap = r.optional_number("weight_cap");
  require(n.neurons >= 1, "network.neurons", "must be >= 1");
  require(n.s_range > 0.0, "network.s_range", "must be > 0");
  require(n.eta > 0.0, "network.eta", "must be > 0");
  require(n.kappa >= 0.0, "network.kappa", "must be >= 0");
  require(!n.weight_cap || *n.weight_cap > 0.0, "network.weight_cap", "must be > 0");
  return n;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ObjectReader r(j, "", {"plant", "nominal_plant", "disturbance", "reference", "mode", "lambda", "u_limit", "network",
                         "initial_state", "duration", "dt_ctrl", "substeps", "output", "seed"});
  ExperimentConfig cfg;

  cfg.seed = r.unsigned_integer("seed", 0);
  cfg.duration = r.number("duration", cfg.duration);
  require(cfg.duration > 0.0, "duration", "must be > 0");
  cfg.dt_ctrl = r.number("dt_ctrl", cfg.dt_ctrl);
  require(cfg.dt_ctrl > 0.0, "dt_ctrl", "must be > 0");
  require(cfg.dt_ctrl <= cfg.duration, "dt_ctrl", "must not exceed duration");
  cfg.substeps = r.unsigned_integer("substeps", cfg.substeps);
  require(cfg.substeps >= 1, "substeps", "must be >= 1");

  cfg.plant = read_plant(object_or_empty(r, "plant"), "plant", std::nullopt);
  cfg.nominal = read_plant(object_or_empty(r, "nominal_plant"), "nominal_plant", cfg.plant);
  const std::size_t order = make_plant(cfg.plant.kind, cfg.plant.params).order;

  cfg.disturbance = read_disturbance(object_or_empty(r, "disturbance"), cfg.dt_ctrl, cfg.seed);
  cfg.reference = read_reference(object_or_empty(r, "reference"), order);

  const std::string mode = r.string("mode", "baseline");
  try {
    cfg.mode = control_mode_from_string(mode);
  } catch (const DomainError&) {
    throw ConfigError("mode", "must be 'baseline' or 'compensated', got '" + mode + "'");
  }
  cfg.lambda = r.number("lambda", cfg.lambda);
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda", "must be > 0, got " + r.at("lambda").dump());
  cfg.u_limit = r.optional_number("u_limit");
  require(!cfg.u_limit || *cfg.u_limit > 0.0, "u_limit", "must be > 0");
  cfg.network = read_network(object_or_empty(r, "network"));

  if (r.has("initial_state")) {
    const json& x0 = r.at("initial_state");
    require(x0.is_array(), "initial_state", "must be an array of numbers");
    for (const auto& v : x0) {
      require(v.is_number() && std::isfinite(v.get<double>()), "initial_state", "entries must be finite numbers");
      cfg.initial_state.push_back(v.get<double>());
    }
    require(cfg.initial_state.size() == order, "initial_state",
            "must have " + std::to_string(order) + " entries (the plant order)");
  } else {
    cfg.initial_state.assign(order, 0.0);
  }

  const json& out = object_or_empty(r, "output");
  ObjectReader o(out, "output", {"dir", "name"});
  if (o.has("dir")) cfg.output.dir = o.string("dir", "");
  cfg.output.name = o.string("name", cfg.output.name);
  require(!cfg.output.name.empty() && cfg.output.name.find('/') == std::string::npos, "output.name",
          "must be a non-empty file stem without '/'");
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::ostringstream msg;
    msg << "JSON parse error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError("", msg.str());
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["plant"] = json{{"kind", cfg.plant.kind}};
  for (const auto& [name, value] : cfg.plant.params) j["plant"][name] = value;
  j["nominal_plant"] = json{{"kind", cfg.nominal.kind}};
  for (const auto& [name, value] : cfg.nominal.params) j["nominal_plant"][name] = value;

  const auto& d = cfg.disturbance;
  json dist{{"kind", to_string(d.kind)}};
  switch (d.kind) {
    case DisturbanceKind::none:
      break;
    case DisturbanceKind::constant:
      dist["offset"] = d.offset;
      dist["bound"] = d.bound;
      break;
    case DisturbanceKind::sinusoid:
      dist["amplitude"] = d.amplitude;
      dist["frequency"] = d.frequency;
      dist["phase"] = d.phase;
      dist["bound"] = d.bound;
      break;
    case DisturbanceKind::band_limited_noise:
      dist["amplitude"] = d.amplitude;
      dist["cutoff"] = d.cutoff;
      dist["seed"] = d.seed;
      dist["sample_dt"] = d.sample_dt;
      dist["bound"] = d.bound;
      break;
  }
  j["disturbance"] = dist;

  const auto& ref = cfg.reference;
  json rj{{"kind", to_string(ref.kind)}};
  if (ref.kind == ReferenceKind::constant) {
    rj["level"] = ref.level;
  } else if (ref.kind == ReferenceKind::sinusoid) {
    rj["amplitude"] = ref.components.at(0).amplitude;
    rj["omega"] = ref.components.at(0).omega;
    rj["phase"] = ref.components.at(0).phase;
  } else {
    rj["components"] = json::array();
    for (const auto& c : ref.components) {
      rj["components"].push_back({{"amplitude", c.amplitude}, {"omega", c.omega}, {"phase", c.phase}});
    }
  }
  j["reference"] = rj;

  j["mode"] = to_string(cfg.mode);
  j["lambda"] = cfg.lambda;
  j["u_limit"] = cfg.u_limit ? json(*cfg.u_limit) : json(nullptr);
  j["network"] = {{"neurons", cfg.network.neurons},
                  {"s_range", cfg.network.s_range},
                  {"eta", cfg.network.eta},
                  {"kappa", cfg.network.kappa},
                  {"weight_cap", cfg.network.weight_cap ? json(*cfg.network.weight_cap) : json(nullptr)}};
  j["initial_state"] = cfg.initial_state;
  j["duration"] = cfg.duration;
  j["dt_ctrl"] = cfg.dt_ctrl;
  j["substeps"] = cfg.substeps;
  j["output"] = json{{"name", cfg.output.name}};
  if (cfg.output.dir) j["output"]["dir"] = *cfg.output.dir;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace neurofl
