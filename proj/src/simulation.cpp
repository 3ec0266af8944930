#include "neurofl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurofl/errors.hpp"

namespace neurofl {

namespace {

void require_finite(std::span<const double> v, const char* where) {
  for (double x : v) {
    if (!std::isfinite(x)) throw DivergenceFault(std::string("non-finite value in ") + where);
  }
}

std::vector<double> axpy(std::span<const double> y, double h, const std::vector<double>& k) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

// The (k mod 4)-th derivative of sin, so that e.g. cos(π/2) is not needed as sin(π).
double sin_derivative(std::size_t k, double angle) {
  switch (k % 4) {
    case 0:
      return std::sin(angle);
    case 1:
      return std::cos(angle);
    case 2:
      return -std::sin(angle);
    default:
      return -std::cos(angle);
  }
}

}  // namespace

std::vector<double> rk4_step(const Derivative& deriv, std::span<const double> y, double t, double dt) {
  if (!(dt > 0.0)) throw DomainError("rk4_step: dt must be > 0");
  require_finite(y, "RK4 input state");

  const double half = 0.5 * dt;
  const auto k1 = deriv(y, t);
  require_finite(k1, "RK4 stage 1");
  const auto y2 = axpy(y, half, k1);
  const auto k2 = deriv(y2, t + half);
  require_finite(k2, "RK4 stage 2");
  const auto y3 = axpy(y, half, k2);
  const auto k3 = deriv(y3, t + half);
  require_finite(k3, "RK4 stage 3");
  const auto y4 = axpy(y, dt, k3);
  const auto k4 = deriv(y4, t + dt);
  require_finite(k4, "RK4 stage 4");

  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  require_finite(out, "RK4 result");
  return out;
}

// ---------------------------------------------------------------------------

ReferenceSpec ReferenceSpec::constant(double level, std::size_t order) {
  ReferenceSpec r;
  r.kind = ReferenceKind::constant;
  r.level = level;
  r.order = order;
  return r;
}

ReferenceSpec ReferenceSpec::sinusoid(double amplitude, double omega, double phase, std::size_t order) {
  ReferenceSpec r;
  r.kind = ReferenceKind::sinusoid;
  r.components = {{amplitude, omega, phase}};
  r.order = order;
  return r;
}

ReferenceSpec ReferenceSpec::sum_of_sinusoids(std::vector<SinusoidComponent> components, std::size_t order) {
  ReferenceSpec r;
  r.kind = ReferenceKind::sum_of_sinusoids;
  r.components = std::move(components);
  r.order = order;
  return r;
}

ReferenceSample reference_at(const ReferenceSpec& spec, double t) {
  if (spec.order == 0) throw DomainError("reference order must be >= 1");
  const std::size_t n = spec.order;
  std::vector<double> derivs(n + 1, 0.0);

  if (spec.kind == ReferenceKind::constant) {
    derivs[0] = spec.level;
  } else {
    if (spec.components.empty()) throw DomainError("sinusoidal reference needs at least one component");
    if (spec.kind == ReferenceKind::sinusoid && spec.components.size() != 1) {
      throw DomainError("sinusoid reference takes exactly one component");
    }
    for (const auto& c : spec.components) {
      const double angle = c.omega * t + c.phase;
      double scale = c.amplitude;
      for (std::size_t k = 0; k <= n; ++k) {
        derivs[k] += scale * sin_derivative(k, angle);
        scale *= c.omega;
      }
    }
  }
  const double xd_n = derivs[n];
  derivs.pop_back();
  return {StateVector(std::move(derivs)), xd_n};
}

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::constant:
      return "constant";
    case ReferenceKind::sinusoid:
      return "sinusoid";
    case ReferenceKind::sum_of_sinusoids:
      return "sum_of_sinusoids";
  }
  return "constant";
}

ReferenceKind reference_kind_from_string(const std::string& name) {
  if (name == "constant") return ReferenceKind::constant;
  if (name == "sinusoid") return ReferenceKind::sinusoid;
  if (name == "sum_of_sinusoids") return ReferenceKind::sum_of_sinusoids;
  throw DomainError("unknown reference kind '" + name + "'");
}

// ---------------------------------------------------------------------------

DisturbanceSource make_disturbance_source(const DisturbanceSpec& spec) {
  return [signal = DisturbanceSignal(spec)](double t, const StateVector&) { return signal(t); };
}

DisturbanceSource network_disturbance(RbfNetwork target, ReferenceSpec reference, double lambda) {
  return [target = std::move(target), reference = std::move(reference), lambda](double t, const StateVector& x) {
    const StateVector error = tracking_error(x, reference_at(reference, t).x_d);
    return network_output(target, filtered_error(error, lambda));
  };
}

// ---------------------------------------------------------------------------

std::string to_string(Event e) {
  switch (e) {
    case Event::saturation:
      return "saturation";
    case Event::weight_cap:
      return "weight_cap";
    case Event::controllability_fault:
      return "controllability_fault";
    case Event::divergence:
      return "divergence";
  }
  return "unknown";
}

std::string EventSet::to_string() const {
  if (empty()) return "none";
  std::string out;
  for (Event e : {Event::saturation, Event::weight_cap, Event::controllability_fault, Event::divergence}) {
    if (!contains(e)) continue;
    if (!out.empty()) out += '|';
    out += neurofl::to_string(e);
  }
  return out;
}

Trajectory run_closed_loop(const PlantModel& truth, const PlantModel& nominal, ControllerState ctrl,
                           const ReferenceSpec& reference, const DisturbanceSource& disturbance,
                           const StateVector& x0, double duration, double dt_ctrl, std::size_t substeps,
                           const SimulationOptions& options) {
  if (!(duration > 0.0)) throw DomainError("duration must be > 0");
  if (!(dt_ctrl > 0.0)) throw DomainError("dt_ctrl must be > 0");
  if (substeps == 0) throw DomainError("substeps must be >= 1");
  const std::size_t n = truth.order;
  if (nominal.order != n || reference.order != n || x0.order() != n || ctrl.gains().order() != n) {
    throw DomainError("plant, nominal model, reference, controller and initial state orders must agree");
  }

  Trajectory traj;
  traj.order = n;
  traj.dt = dt_ctrl;
  const auto last = static_cast<std::size_t>(std::floor(duration / dt_ctrl + 1e-9));
  traj.samples.reserve(last + 1);

  auto fail = [&traj](Event kind, double t, std::string message) {
    if (!traj.samples.empty()) traj.samples.back().events.insert(kind);
    traj.terminal = TerminalEvent{kind, t, std::move(message)};
  };

  std::vector<double> y(x0.values().begin(), x0.values().end());
  const double h = dt_ctrl / static_cast<double>(substeps);

  for (std::size_t k = 0; k <= last; ++k) {
    const double t = static_cast<double>(k) * dt_ctrl;
    const bool runaway = std::any_of(y.begin(), y.end(), [&](double v) {
      return !std::isfinite(v) || std::abs(v) > options.divergence_threshold;
    });
    if (runaway) {
      fail(Event::divergence, t, "plant state left the divergence threshold");
      break;
    }

    try {
      const StateVector x(y);
      const ReferenceSample ref = reference_at(reference, t);
      const double d_now = disturbance(t, x);
      const std::vector<double> w_now =
          options.record_weights && ctrl.network()
              ? std::vector<double>(ctrl.network()->weights().begin(), ctrl.network()->weights().end())
              : std::vector<double>{};

      ControlStep step = control_step(ctrl, nominal, x, ref.x_d, ref.xd_n, t, dt_ctrl);

      Sample rec;
      rec.t = t;
      rec.x = y;
      rec.x_d.assign(ref.x_d.values().begin(), ref.x_d.values().end());
      rec.u = step.log.u;
      rec.s = step.log.s;
      rec.d_hat = step.log.d_hat;
      rec.d_true = d_now;
      rec.w_norm = step.log.w_norm;
      if (step.log.saturated) rec.events.insert(Event::saturation);
      if (step.log.weight_cap_hit) rec.events.insert(Event::weight_cap);
      traj.samples.push_back(std::move(rec));
      if (options.record_weights) traj.weights.push_back(w_now);

      ctrl = std::move(step.next);
      if (k == last) break;

      const double u = step.u;
      const Derivative deriv = [&](std::span<const double> state, double tau) {
        require_finite(state, "plant state");
        const StateVector xs(std::vector<double>(state.begin(), state.end()));
        if (options.on_evaluation) options.on_evaluation(tau, u);
        std::vector<double> dy(n);
        for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = state[i + 1];
        dy[n - 1] = eval_dynamics(truth, xs, u, disturbance(tau, xs), tau);
        return dy;
      };
      for (std::size_t j = 0; j < substeps; ++j) {
        y = rk4_step(deriv, y, t + static_cast<double>(j) * h, h);
      }
    } catch (const ControllabilityFault& fault) {
      fail(Event::controllability_fault, fault.time(), fault.what());
      break;
    } catch (const DivergenceFault& fault) {
      fail(Event::divergence, t, fault.what());
      break;
    }
  }
  return traj;
}

Trajectory run_closed_loop(const PlantModel& truth, const PlantModel& nominal, ControllerState ctrl,
                           const ReferenceSpec& reference, const DisturbanceSpec& disturbance,
                           const StateVector& x0, double duration, double dt_ctrl, std::size_t substeps,
                           const SimulationOptions& options) {
  return run_closed_loop(truth, nominal, std::move(ctrl), reference, make_disturbance_source(disturbance), x0,
                         duration, dt_ctrl, substeps, options);
}

// ---------------------------------------------------------------------------

Metrics compute_metrics(const Trajectory& traj) {
  const auto& samples = traj.samples;
  if (samples.empty()) throw DomainError("compute_metrics: empty trajectory");

  auto err = [](const Sample& s) { return s.x[0] - s.x_d[0]; };

  Metrics m;
  double sq = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double e = err(samples[k]);
    sq += e * e;
    if (k > 0) {
      m.iae += 0.5 * (std::abs(e) + std::abs(err(samples[k - 1]))) * (samples[k].t - samples[k - 1].t);
    }
    m.max_abs_u = std::max(m.max_abs_u, std::abs(samples[k].u));
  }
  m.rms_error = std::sqrt(sq / static_cast<double>(samples.size()));

  const double t0 = samples.front().t;
  const double window_start = t0 + 0.9 * (samples.back().t - t0);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples) {
    if (s.t + 1e-12 >= window_start) {
      sum += err(s);
      ++count;
    }
  }
  m.steady_state_error = sum / static_cast<double>(count);

  bool finite = true;
  for (const auto& s : samples) {
    for (double v : {s.u, s.s, s.d_hat, s.d_true, s.w_norm}) finite = finite && std::isfinite(v);
    for (double v : s.x) finite = finite && std::isfinite(v);
  }
  m.bounded = finite && !traj.terminal;
  return m;
}

}  // namespace neurofl
