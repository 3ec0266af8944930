#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurofl/controller.hpp"
#include "neurofl/dynamics.hpp"
#include "neurofl/plants.hpp"
#include "neurofl/rbf_network.hpp"

namespace neurofl {

using Derivative = std::function<std::vector<double>(std::span<const double> y, double t)>;

/// Classical fourth-order Runge-Kutta step. Throws DivergenceFault if any
/// stage produces a non-finite value.
std::vector<double> rk4_step(const Derivative& deriv, std::span<const double> y, double t, double dt);

// ---------------------------------------------------------------------------
// Reference trajectories

enum class ReferenceKind { constant, sinusoid, sum_of_sinusoids };

struct SinusoidComponent {
  double amplitude = 1.0;
  double omega = 1.0;  // rad/s
  double phase = 0.0;  // rad

  bool operator==(const SinusoidComponent&) const = default;
};

/// x_d(t): a constant level, or a sum of A sin(ω t + φ) terms. Every
/// derivative up to order n is analytic.
struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::constant;
  double level = 0.0;
  std::vector<SinusoidComponent> components;
  std::size_t order = 2;

  bool operator==(const ReferenceSpec&) const = default;

  static ReferenceSpec constant(double level, std::size_t order);
  static ReferenceSpec sinusoid(double amplitude, double omega, double phase, std::size_t order);
  static ReferenceSpec sum_of_sinusoids(std::vector<SinusoidComponent> components, std::size_t order);
};

struct ReferenceSample {
  StateVector x_d;  // [x_d, x_d', ..., x_d^(n-1)]
  double xd_n;      // x_d^(n)
};

ReferenceSample reference_at(const ReferenceSpec& spec, double t);

std::string to_string(ReferenceKind kind);
ReferenceKind reference_kind_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Disturbance sources seen by the integrator

/// d as a function of time and the true plant state.
using DisturbanceSource = std::function<double(double t, const StateVector& x)>;

/// Wraps a time-only DisturbanceSpec (with its own noise cache).
DisturbanceSource make_disturbance_source(const DisturbanceSpec& spec);

/// d = Σ w*_i φ_i(s) with s built from x - x_d(t): a disturbance that lies
/// exactly in the span of the network (ideal representation).
DisturbanceSource network_disturbance(RbfNetwork target, ReferenceSpec reference, double lambda);

// ---------------------------------------------------------------------------
// Trajectories

enum class Event : std::uint8_t {
  saturation = 1,
  weight_cap = 2,
  controllability_fault = 4,
  divergence = 8,
};

class EventSet {
 public:
  void insert(Event e) noexcept { bits_ |= static_cast<std::uint8_t>(e); }
  bool contains(Event e) const noexcept { return (bits_ & static_cast<std::uint8_t>(e)) != 0; }
  bool empty() const noexcept { return bits_ == 0; }
  /// "none", or '|'-joined event names.
  std::string to_string() const;

  bool operator==(const EventSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

std::string to_string(Event e);

struct Sample {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> x_d;
  double u = 0.0;
  double s = 0.0;
  double d_hat = 0.0;
  double d_true = 0.0;
  double w_norm = 0.0;
  EventSet events;
};

struct TerminalEvent {
  Event kind;
  double t;
  std::string message;
};

struct Trajectory {
  std::size_t order = 0;
  double dt = 0.0;
  std::vector<Sample> samples;
  std::optional<TerminalEvent> terminal;  // set when the run stopped on a fault
  std::vector<std::vector<double>> weights;  // per sample, if requested
};

struct SimulationOptions {
  bool record_weights = false;
  double divergence_threshold = 1e9;
  /// Called on every plant-derivative evaluation with (t, held u).
  std::function<void(double, double)> on_evaluation;
};

/// Closed loop under a zero-order-hold controller: at each sample t_k = k dt_ctrl
/// the controller reads x, u is held while the truth plant is integrated over
/// dt_ctrl with `substeps` RK4 steps, then the next sample is taken. Faults end
/// the run early and are reported in `terminal`, never thrown.
Trajectory run_closed_loop(const PlantModel& truth, const PlantModel& nominal, ControllerState ctrl,
                           const ReferenceSpec& reference, const DisturbanceSource& disturbance,
                           const StateVector& x0, double duration, double dt_ctrl, std::size_t substeps,
                           const SimulationOptions& options = {});

Trajectory run_closed_loop(const PlantModel& truth, const PlantModel& nominal, ControllerState ctrl,
                           const ReferenceSpec& reference, const DisturbanceSpec& disturbance,
                           const StateVector& x0, double duration, double dt_ctrl, std::size_t substeps,
                           const SimulationOptions& options = {});

// ---------------------------------------------------------------------------
// Metrics

struct Metrics {
  double rms_error = 0.0;           // RMS of x̃ over all samples
  double iae = 0.0;                 // ∫|x̃| dt, trapezoid rule
  double steady_state_error = 0.0;  // mean x̃ over the final 10% of the run (signed)
  double max_abs_u = 0.0;
  bool bounded = true;              // all values finite and no fault event
};

Metrics compute_metrics(const Trajectory& traj);

}  // namespace neurofl
