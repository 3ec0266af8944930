#include "neurofl/plants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "neurofl/errors.hpp"

namespace neurofl {

double eval_dynamics(const PlantModel& plant, const StateVector& x, double u, double d, double t) {
  if (x.order() != plant.order) {
    throw DomainError("plant '" + plant.name + "' has order " + std::to_string(plant.order) +
                      " but the state has order " + std::to_string(x.order()));
  }
  const double b = plant.b_eval(x, t);
  if (!(std::abs(b) >= plant.b_min)) {
    const auto v = x.values();
    throw ControllabilityFault("plant '" + plant.name + "': |b| = " + std::to_string(std::abs(b)) +
                                   " below b_min = " + std::to_string(plant.b_min),
                               std::vector<double>(v.begin(), v.end()), t);
  }
  return plant.f_eval(x, t) + b * u + d;
}

PlantModel pendulum_plant(double m, double l, double c, double g) {
  if (!(m > 0.0) || !(l > 0.0)) throw DomainError("pendulum: m and l must be > 0");
  if (!(c >= 0.0) || !(g >= 0.0)) throw DomainError("pendulum: c and g must be >= 0");
  const double inertia = m * l * l;
  PlantModel p;
  p.name = "pendulum";
  p.order = 2;
  p.f_eval = [g, l, c](const StateVector& x, double) { return -(g / l) * std::sin(x[0]) - c * x[1]; };
  p.b_eval = [inertia](const StateVector&, double) { return 1.0 / inertia; };
  p.b_min = 1.0 / (2.0 * inertia);
  p.params = {{"m", m}, {"l", l}, {"c", c}, {"g", g}};
  return p;
}

PlantModel duffing_plant(double a, double b1, double b2, double gain) {
  if (gain == 0.0 || !std::isfinite(gain)) throw DomainError("duffing: gain must be non-zero");
  PlantModel p;
  p.name = "duffing";
  p.order = 2;
  p.f_eval = [a, b1, b2](const StateVector& x, double) { return -a * x[1] - b1 * x[0] - b2 * x[0] * x[0] * x[0]; };
  p.b_eval = [gain](const StateVector&, double) { return gain; };
  p.b_min = std::abs(gain);
  p.params = {{"a", a}, {"b1", b1}, {"b2", b2}, {"gain", gain}};
  return p;
}

PlantModel vanderpol_plant(double mu, double gain) {
  if (gain == 0.0 || !std::isfinite(gain)) throw DomainError("vanderpol: gain must be non-zero");
  PlantModel p;
  p.name = "vanderpol";
  p.order = 2;
  p.f_eval = [mu](const StateVector& x, double) { return mu * (1.0 - x[0] * x[0]) * x[1] - x[0]; };
  p.b_eval = [gain](const StateVector&, double) { return gain; };
  p.b_min = std::abs(gain);
  p.params = {{"mu", mu}, {"gain", gain}};
  return p;
}

const std::map<std::string, double>& plant_parameter_defaults(const std::string& kind) {
  static const std::map<std::string, std::map<std::string, double>> defaults = {
      {"pendulum", {{"m", 1.0}, {"l", 1.0}, {"c", 0.0}, {"g", 9.81}}},
      {"duffing", {{"a", 0.2}, {"b1", 1.0}, {"b2", 1.0}, {"gain", 1.0}}},
      {"vanderpol", {{"mu", 1.0}, {"gain", 1.0}}},
  };
  const auto it = defaults.find(kind);
  if (it == defaults.end()) throw DomainError("unknown plant kind '" + kind + "'");
  return it->second;
}

PlantModel make_plant(const std::string& kind, const std::map<std::string, double>& params) {
  auto merged = plant_parameter_defaults(kind);
  for (const auto& [name, value] : params) {
    if (!merged.contains(name)) throw DomainError("plant '" + kind + "' has no parameter '" + name + "'");
    merged[name] = value;
  }
  if (kind == "pendulum") return pendulum_plant(merged["m"], merged["l"], merged["c"], merged["g"]);
  if (kind == "duffing") return duffing_plant(merged["a"], merged["b1"], merged["b2"], merged["gain"]);
  return vanderpol_plant(merged["mu"], merged["gain"]);
}

DisturbanceSpec DisturbanceSpec::none() { return {}; }

DisturbanceSpec DisturbanceSpec::constant(double offset) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::constant;
  s.offset = offset;
  s.bound = std::abs(offset);
  return s;
}

DisturbanceSpec DisturbanceSpec::sinusoid(double amplitude, double frequency_hz, double phase) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::sinusoid;
  s.amplitude = amplitude;
  s.frequency = frequency_hz;
  s.phase = phase;
  s.bound = std::abs(amplitude);
  return s;
}

DisturbanceSpec DisturbanceSpec::noise(double amplitude, double cutoff_hz, std::uint64_t seed, double sample_dt) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::band_limited_noise;
  s.amplitude = amplitude;
  s.cutoff = cutoff_hz;
  s.seed = seed;
  s.sample_dt = sample_dt;
  s.bound = std::abs(amplitude);
  return s;
}

void validate(const DisturbanceSpec& spec) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(spec.bound) || spec.bound < 0.0) throw DomainError("disturbance bound must be finite and >= 0");
  switch (spec.kind) {
    case DisturbanceKind::none:
      break;
    case DisturbanceKind::constant:
      if (!finite(spec.offset)) throw DomainError("disturbance offset must be finite");
      if (std::abs(spec.offset) > spec.bound) throw DomainError("disturbance bound is smaller than |offset|");
      break;
    case DisturbanceKind::sinusoid:
      if (!finite(spec.amplitude) || !finite(spec.frequency) || !finite(spec.phase)) {
        throw DomainError("sinusoidal disturbance parameters must be finite");
      }
      if (std::abs(spec.amplitude) > spec.bound) throw DomainError("disturbance bound is smaller than |amplitude|");
      break;
    case DisturbanceKind::band_limited_noise:
      if (!finite(spec.amplitude)) throw DomainError("noise amplitude must be finite");
      if (!(spec.cutoff > 0.0) || !finite(spec.cutoff)) throw DomainError("noise cutoff must be > 0");
      if (!(spec.sample_dt > 0.0) || !finite(spec.sample_dt)) throw DomainError("noise sample_dt must be > 0");
      break;
  }
}

DisturbanceSignal::DisturbanceSignal(DisturbanceSpec spec) : spec_(spec), rng_(spec.seed) {
  validate(spec_);
  if (spec_.kind == DisturbanceKind::band_limited_noise) {
    alpha_ = 1.0 - std::exp(-2.0 * std::numbers::pi * spec_.cutoff * spec_.sample_dt);
    samples_.push_back(0.0);
  }
}

double DisturbanceSignal::operator()(double t) const {
  switch (spec_.kind) {
    case DisturbanceKind::none:
      return 0.0;
    case DisturbanceKind::constant:
      return spec_.offset;
    case DisturbanceKind::sinusoid:
      return spec_.amplitude * std::sin(2.0 * std::numbers::pi * spec_.frequency * t + spec_.phase);
    case DisturbanceKind::band_limited_noise:
      return noise_at(t);
  }
  return 0.0;
}

double DisturbanceSignal::noise_sample(std::size_t k) const {
  // Raw engine output is fixed by the standard; map it to [-A, A] by hand so
  // the sequence does not depend on the library's distribution code.
  while (samples_.size() <= k) {
    const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double drive = spec_.amplitude * (2.0 * unit - 1.0);
    const double prev = samples_.back();
    samples_.push_back(prev + alpha_ * (drive - prev));
  }
  const double y = samples_[k];
  return std::clamp(y, -spec_.bound, spec_.bound);
}

double DisturbanceSignal::noise_at(double t) const {
  if (!(t >= 0.0)) t = 0.0;
  const double pos = t / spec_.sample_dt;
  const auto k = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(k);
  const double a = noise_sample(k);
  if (frac == 0.0) return a;
  const double b = noise_sample(k + 1);
  return a + frac * (b - a);
}

double disturbance_sample(const DisturbanceSpec& spec, double t) { return DisturbanceSignal(spec)(t); }

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::none:
      return "none";
    case DisturbanceKind::constant:
      return "constant";
    case DisturbanceKind::sinusoid:
      return "sinusoid";
    case DisturbanceKind::band_limited_noise:
      return "band_limited_noise";
  }
  return "none";
}

DisturbanceKind disturbance_kind_from_string(const std::string& name) {
  if (name == "none") return DisturbanceKind::none;
  if (name == "constant") return DisturbanceKind::constant;
  if (name == "sinusoid") return DisturbanceKind::sinusoid;
  if (name == "band_limited_noise") return DisturbanceKind::band_limited_noise;
  throw DomainError("unknown disturbance kind '" + name + "'");
}

}  // namespace neurofl
