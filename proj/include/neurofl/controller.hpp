#pragma once

#include <optional>

#include "neurofl/dynamics.hpp"
#include "neurofl/plants.hpp"
#include "neurofl/rbf_network.hpp"

namespace neurofl {

enum class ControlMode { baseline, compensated };

std::string to_string(ControlMode mode);
ControlMode control_mode_from_string(const std::string& name);

/// Controller value. `network` is present iff mode == compensated.
class ControllerState {
 public:
  static ControllerState baseline(GainVector gains, std::optional<double> u_limit = std::nullopt);
  static ControllerState compensated(GainVector gains, RbfNetwork network,
                                     std::optional<double> u_limit = std::nullopt);

  const GainVector& gains() const noexcept { return gains_; }
  ControlMode mode() const noexcept { return mode_; }
  const std::optional<RbfNetwork>& network() const noexcept { return network_; }
  const std::optional<double>& u_limit() const noexcept { return u_limit_; }

  ControllerState with_network(RbfNetwork network) const;

  bool operator==(const ControllerState&) const = default;

 private:
  ControllerState(GainVector gains, ControlMode mode, std::optional<RbfNetwork> network,
                  std::optional<double> u_limit);

  GainVector gains_;
  ControlMode mode_;
  std::optional<RbfNetwork> network_;
  std::optional<double> u_limit_;
};

struct ControlOutput {
  double u = 0.0;
  double s = 0.0;      // filtered tracking error (compensated mode only)
  double d_hat = 0.0;  // network estimate of d (compensated mode only)
  bool saturated = false;
};

/// Feedback linearization:
///   u = (-f + x_d^(n) - Σ k_i x̃^(i)) / b
/// Throws ControllabilityFault when |b_val| < b_min.
ControlOutput fl_control(const ControllerState& ctrl, const StateVector& x, const StateVector& x_d, double xd_n,
                         double f_val, double b_val, double b_min);

/// Feedback linearization with neural compensation:
///   u = (-f + x_d^(n) - Σ k_i x̃^(i) - d̂(s)) / b,   s = filtered_error(x̃, λ).
/// Weights are not adapted here. Throws ConfigError without a network.
ControlOutput nn_fl_control(const ControllerState& ctrl, const StateVector& x, const StateVector& x_d, double xd_n,
                            double f_val, double b_val, double b_min, double lambda);

struct StepLog {
  double u = 0.0;
  double s = 0.0;
  double d_hat = 0.0;
  double w_norm = 0.0;  // weights in effect when u was computed
  bool saturated = false;
  bool weight_cap_hit = false;
};

struct ControlStep {
  double u;
  ControllerState next;
  StepLog log;
};

/// One sampled control step: evaluate the nominal f, b at (x, t), compute u,
/// then (compensated mode) adapt the weights with the same s over dt_ctrl.
ControlStep control_step(const ControllerState& ctrl, const PlantModel& plant_nominal, const StateVector& x,
                         const StateVector& x_d, double xd_n, double t, double dt_ctrl);

}  // namespace neurofl
