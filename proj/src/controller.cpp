#include "neurofl/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurofl/errors.hpp"

namespace neurofl {

namespace {

void check_b(double b_val, double b_min, const StateVector& x) {
  if (!(std::abs(b_val) >= b_min)) {
    const auto v = x.values();
    throw ControllabilityFault("control gain |b| = " + std::to_string(std::abs(b_val)) + " below b_min = " +
                                   std::to_string(b_min),
                               std::vector<double>(v.begin(), v.end()), 0.0);
  }
}

// Shared arithmetic for both control laws, so that d̂ = 0 reproduces the
// baseline bit for bit.
ControlOutput feedback_law(const ControllerState& ctrl, const StateVector& error, double xd_n, double f_val,
                           double b_val, double d_hat) {
  const auto k = ctrl.gains().gains();
  double feedback = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) feedback += k[i] * error[i];

  ControlOutput out;
  out.d_hat = d_hat;
  out.u = (-f_val + xd_n - feedback - d_hat) / b_val;
  if (const auto& limit = ctrl.u_limit(); limit && std::abs(out.u) > *limit) {
    out.u = std::clamp(out.u, -*limit, *limit);
    out.saturated = true;
  }
  return out;
}

StateVector checked_error(const ControllerState& ctrl, const StateVector& x, const StateVector& x_d) {
  StateVector error = tracking_error(x, x_d);
  if (error.order() != ctrl.gains().order()) {
    throw DomainError("controller order " + std::to_string(ctrl.gains().order()) + " does not match state order " +
                      std::to_string(error.order()));
  }
  return error;
}

}  // namespace

std::string to_string(ControlMode mode) { return mode == ControlMode::baseline ? "baseline" : "compensated"; }

ControlMode control_mode_from_string(const std::string& name) {
  if (name == "baseline") return ControlMode::baseline;
  if (name == "compensated") return ControlMode::compensated;
  throw DomainError("unknown controller mode '" + name + "'");
}

ControllerState::ControllerState(GainVector gains, ControlMode mode, std::optional<RbfNetwork> network,
                                 std::optional<double> u_limit)
    : gains_(std::move(gains)), mode_(mode), network_(std::move(network)), u_limit_(u_limit) {
  if (u_limit_ && !(*u_limit_ > 0.0)) throw DomainError("u_limit must be > 0");
  if (!hurwitz_check(gains_.characteristic_polynomial())) {
    throw DomainError("controller gains are not Hurwitz");
  }
}

ControllerState ControllerState::baseline(GainVector gains, std::optional<double> u_limit) {
  return ControllerState(std::move(gains), ControlMode::baseline, std::nullopt, u_limit);
}

ControllerState ControllerState::compensated(GainVector gains, RbfNetwork network, std::optional<double> u_limit) {
  return ControllerState(std::move(gains), ControlMode::compensated, std::move(network), u_limit);
}

ControllerState ControllerState::with_network(RbfNetwork network) const {
  ControllerState next = *this;
  next.network_ = std::move(network);
  return next;
}

ControlOutput fl_control(const ControllerState& ctrl, const StateVector& x, const StateVector& x_d, double xd_n,
                         double f_val, double b_val, double b_min) {
  check_b(b_val, b_min, x);
  return feedback_law(ctrl, checked_error(ctrl, x, x_d), xd_n, f_val, b_val, 0.0);
}

ControlOutput nn_fl_control(const ControllerState& ctrl, const StateVector& x, const StateVector& x_d, double xd_n,
                            double f_val, double b_val, double b_min, double lambda) {
  if (!ctrl.network()) throw ConfigError("network", "compensated control requires an RBF network");
  check_b(b_val, b_min, x);
  const StateVector error = checked_error(ctrl, x, x_d);
  const double s = filtered_error(error, lambda);
  ControlOutput out = feedback_law(ctrl, error, xd_n, f_val, b_val, network_output(*ctrl.network(), s));
  out.s = s;
  return out;
}

ControlStep control_step(const ControllerState& ctrl, const PlantModel& plant_nominal, const StateVector& x,
                         const StateVector& x_d, double xd_n, double t, double dt_ctrl) {
  if (!(dt_ctrl > 0.0)) throw DomainError("dt_ctrl must be > 0");
  if (x.order() != plant_nominal.order) throw DomainError("state order does not match the nominal plant");

  const double f_val = plant_nominal.f_eval(x, t);
  const double b_val = plant_nominal.b_eval(x, t);

  ControlOutput out;
  try {
    out = ctrl.mode() == ControlMode::baseline
              ? fl_control(ctrl, x, x_d, xd_n, f_val, b_val, plant_nominal.b_min)
              : nn_fl_control(ctrl, x, x_d, xd_n, f_val, b_val, plant_nominal.b_min, ctrl.gains().lambda());
  } catch (const ControllabilityFault& fault) {
    throw ControllabilityFault(fault.what(), fault.state(), t);
  }

  StepLog log{out.u, out.s, out.d_hat, 0.0, out.saturated, false};
  if (ctrl.mode() == ControlMode::baseline) return {out.u, ctrl, log};

  log.w_norm = ctrl.network()->weight_norm();
  AdaptResult adapted = adapt_weights(*ctrl.network(), out.s, dt_ctrl);
  log.weight_cap_hit = adapted.cap_hit;
  return {out.u, ctrl.with_network(std::move(adapted.network)), log};
}

}  // namespace neurofl
