#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "neurofl/dynamics.hpp"

namespace neurofl {

/// A plant x^(n) = f(x, t) + b(x, t) u + d in companion form.
struct PlantModel {
  using Eval = std::function<double(const StateVector&, double)>;

  std::string name;
  std::size_t order = 0;
  Eval f_eval;
  Eval b_eval;
  double b_min = 0.0;  // |b| below this is a controllability fault
  std::map<std::string, double> params;
};

/// x^(n) = f + b u + d. Throws ControllabilityFault when |b| < b_min and
/// DomainError on an order mismatch.
double eval_dynamics(const PlantModel& plant, const StateVector& x, double u, double d, double t);

/// f = -(g/l) sin θ - c θ',  b = 1/(m l²).
PlantModel pendulum_plant(double m, double l, double c, double g);

/// f = -a x' - b1 x - b2 x³,  b = gain.
PlantModel duffing_plant(double a, double b1, double b2, double gain);

/// f = μ (1 - x²) x' - x,  b = gain.
PlantModel vanderpol_plant(double mu, double gain);

/// Builds one of the plants above from a kind name and named parameters.
/// Missing parameters take their documented defaults; unknown names throw.
PlantModel make_plant(const std::string& kind, const std::map<std::string, double>& params);

/// Names and default values of the parameters accepted by `make_plant(kind, ...)`.
const std::map<std::string, double>& plant_parameter_defaults(const std::string& kind);

enum class DisturbanceKind { none, constant, sinusoid, band_limited_noise };

/// Additive disturbance d(t) with a stated bound δ >= |d(t)|.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::none;
  double offset = 0.0;       // constant
  double amplitude = 0.0;    // sinusoid, noise
  double frequency = 0.0;    // sinusoid, Hz
  double phase = 0.0;        // sinusoid, rad
  double cutoff = 1.0;       // noise low-pass cutoff, Hz
  double sample_dt = 1e-3;   // noise sample period, s
  std::uint64_t seed = 0;    // noise
  double bound = 0.0;        // δ

  bool operator==(const DisturbanceSpec&) const = default;

  static DisturbanceSpec none();
  static DisturbanceSpec constant(double offset);
  static DisturbanceSpec sinusoid(double amplitude, double frequency_hz, double phase);
  static DisturbanceSpec noise(double amplitude, double cutoff_hz, std::uint64_t seed, double sample_dt);
};

/// Throws DomainError if the disturbance parameters are invalid or its bound is
/// smaller than the signal's own peak (constant, sinusoid).
void validate(const DisturbanceSpec& spec);

/// Sampler for one simulation. Noise samples are generated lazily and cached,
/// so sampling a whole run costs O(samples). Not safe for concurrent use;
/// give each simulation its own copy.
class DisturbanceSignal {
 public:
  explicit DisturbanceSignal(DisturbanceSpec spec);

  double operator()(double t) const;
  const DisturbanceSpec& spec() const noexcept { return spec_; }

 private:
  double noise_at(double t) const;
  double noise_sample(std::size_t k) const;

  DisturbanceSpec spec_;
  double alpha_ = 0.0;
  mutable std::mt19937_64 rng_;
  mutable std::vector<double> samples_;  // filtered and clamped, index k at t = k h
};

/// d(t) for the given spec. Deterministic in (spec, t); |d(t)| <= spec.bound.
double disturbance_sample(const DisturbanceSpec& spec, double t);

std::string to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(const std::string& name);

}  // namespace neurofl
