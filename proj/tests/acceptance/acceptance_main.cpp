// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "neurofl/config.hpp"
#include "neurofl/controller.hpp"
#include "neurofl/dynamics.hpp"
#include "neurofl/harness.hpp"
#include "neurofl/plants.hpp"
#include "neurofl/rbf_network.hpp"
#include "neurofl/simulation.hpp"
#include "companion_roots.hpp"

using namespace neurofl;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double tracking_err(const Sample& s) { return s.x[0] - s.x_d[0]; }

// Criterion 1: every root of p^n + k_{n-1} p^{n-1} + ... + k_0 sits at -lambda.
Verdict pole_placement() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
      const auto poly = binomial_gains(n, lambda).characteristic_polynomial();
      const auto roots = oracle::companion_roots_extended(poly.coefficients());
      if (roots.size() != n) return {false, fmt("n=%zu: oracle returned %zu roots", n, roots.size())};
      for (const auto& r : roots) worst = std::max(worst, std::abs(r - std::complex<double>(-lambda, 0.0)));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-9 && elapsed < 1.0, fmt("max |root + lambda| = %.3g (tol 1e-9), %.3f s (limit 1 s)", worst, elapsed)};
}

// Criterion 2: exact model, no disturbance; error must follow
// x̃'' + 4x̃' + 4x̃ = 0 from x̃(0) = 1, x̃'(0) = -1, i.e. (1 + t) e^{-2t}.
Verdict nominal_convergence() {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = parse_config(R"({
    "plant": {"kind": "pendulum"},
    "reference": {"kind": "sinusoid", "amplitude": 1.0, "omega": 1.0},
    "mode": "baseline", "lambda": 2.0,
    "initial_state": [1.0, 0.0], "duration": 10.0, "dt_ctrl": 0.001})");
  const auto run = run_experiment(cfg, ControlMode::baseline);
  const double elapsed = seconds_since(start);

  double sq = 0.0;
  std::size_t tail = 0;
  double worst_ratio = 0.0, worst_t = 0.0;
  double first_violation = -1.0;
  for (const auto& s : run.trajectory.samples) {
    const double e = tracking_err(s);
    if (s.t >= 9.0 - 1e-12) {
      sq += e * e;
      ++tail;
    }
    const double envelope = (1.0 + s.t) * std::exp(-2.0 * s.t);
    const double ratio = std::abs(e) / envelope;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_t = s.t;
    }
    if (ratio > 1.05 && first_violation < 0.0) first_violation = s.t;
  }
  const double rms_tail = std::sqrt(sq / static_cast<double>(tail));
  const bool rms_ok = rms_tail < 1e-3;
  const bool envelope_ok = first_violation < 0.0;
  return {rms_ok && envelope_ok && run.metrics.bounded && elapsed < 5.0,
          fmt("final-second RMS = %.3g (tol 1e-3, %s); envelope: max |e|/env = %.3g at t = %.3f, "
              "first excursion above 1.05 at t = %.3f (%s); %.2f s",
              rms_tail, rms_ok ? "ok" : "fail", worst_ratio, worst_t, first_violation,
              envelope_ok ? "ok" : "fail", elapsed)};
}

ExperimentConfig constant_disturbance_scenario(ControlMode mode) {
  auto cfg = parse_config(R"({
    "plant": {"kind": "pendulum"},
    "disturbance": {"kind": "constant", "offset": 0.5},
    "reference": {"kind": "constant", "level": 0.5},
    "lambda": 2.0,
    "network": {"neurons": 11, "s_range": 2.0, "eta": 20.0, "kappa": 0.0},
    "initial_state": [0.0, 0.0], "duration": 20.0, "dt_ctrl": 0.001})");
  cfg.mode = mode;
  return cfg;
}

// Criterion 3: baseline steady state with d = 0.5 and k_0 = 4.
Verdict baseline_steady_state() {
  const auto start = std::chrono::steady_clock::now();
  const auto run = run_experiment(constant_disturbance_scenario(ControlMode::baseline), ControlMode::baseline);
  const double elapsed = seconds_since(start);
  const double sse = run.metrics.steady_state_error;
  const double expected = -0.125;
  const double rel = std::abs(sse - expected) / std::abs(expected);
  return {rel <= 0.01 && elapsed < 5.0,
          fmt("steady_state_error = %.6f, expected %.3f within 1%% (rel dev %.3g); %.2f s", sse, expected, rel,
              elapsed)};
}

// Criterion 4: same scenario with the network switched on.
Verdict compensation_benefit() {
  const auto cfg = constant_disturbance_scenario(ControlMode::compensated);
  const auto base = run_experiment(cfg, ControlMode::baseline);
  const auto comp = run_experiment(cfg, ControlMode::compensated);
  double max_s = 0.0;
  for (const auto& s : comp.trajectory.samples) max_s = std::max(max_s, std::abs(s.s));
  const double sse = std::abs(comp.metrics.steady_state_error);
  const double ratio = std::abs(base.metrics.steady_state_error) / sse;
  const bool covered = max_s <= cfg.network.s_range;
  return {sse * 10.0 <= 0.125 && comp.metrics.bounded && covered,
          fmt("|sse| compensated = %.3g (need <= 0.0125), ratio vs baseline = %.1f, bounded = %s, "
              "max |s| = %.3g within s_range %.1f",
              sse, ratio, comp.metrics.bounded ? "true" : "false", max_s, cfg.network.s_range)};
}

// Criterion 5: disturbance lies exactly in the network span.
Verdict lyapunov_descent() {
  const double lambda = 2.0, eta = 2.0, dt = 1e-4, duration = 10.0;
  const auto plant = pendulum_plant(1.0, 1.0, 0.0, 9.81);
  const auto ref = ReferenceSpec::sinusoid(0.5, 1.0, 0.0, 2);

  std::mt19937_64 rng(20241018);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  const auto shape = default_network(11, 2.0, eta);
  std::vector<double> w_star(shape.neuron_count());
  for (auto& w : w_star) w = dist(rng);
  const auto target = shape.with_weights(w_star);

  const auto ctrl = ControllerState::compensated(binomial_gains(2, lambda), shape);
  SimulationOptions opts;
  opts.record_weights = true;
  const auto traj = run_closed_loop(plant, plant, ctrl, ref, network_disturbance(target, ref, lambda),
                                    StateVector({0.8, 0.0}), duration, dt, 1, opts);
  if (traj.terminal) return {false, "run ended with " + traj.terminal->message};

  auto V = [&](std::size_t k) {
    double dw = 0.0;
    for (std::size_t i = 0; i < w_star.size(); ++i) {
      const double e = traj.weights[k][i] - w_star[i];
      dw += e * e;
    }
    const double s = traj.samples[k].s;
    return 0.5 * s * s + dw / (2.0 * eta);
  };
  const double slack = 10.0 * dt * dt;
  std::size_t violations = 0;
  double worst = -1e300;
  for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
    const double dv = V(k + 1) - V(k);
    worst = std::max(worst, dv);
    if (dv > slack) ++violations;
  }
  const double v0 = V(0), v_end = V(traj.samples.size() - 1);
  return {violations == 0,
          fmt("%zu of %zu steps exceed slack %.1e; max dV = %.3g; V: %.4g -> %.4g", violations,
              traj.samples.size() - 1, slack, worst, v0, v_end)};
}

// Criterion 6: persistent sinusoidal disturbance, long run, caps configured.
Verdict boundedness() {
  const double u_limit = 100.0, w_cap = 50.0, err_cap = 1.0;  // initial error is 0.5
  auto cfg = parse_config(R"({
    "plant": {"kind": "pendulum"},
    "disturbance": {"kind": "sinusoid", "amplitude": 1.0, "frequency": 0.5},
    "reference": {"kind": "sinusoid", "amplitude": 1.0, "omega": 1.0},
    "mode": "compensated", "lambda": 2.0,
    "network": {"neurons": 11, "s_range": 2.0, "eta": 20.0, "kappa": 0.0},
    "initial_state": [0.5, 0.0], "duration": 60.0, "dt_ctrl": 0.001})");
  cfg.u_limit = u_limit;
  cfg.network.weight_cap = w_cap;
  const auto run = run_experiment(cfg, ControlMode::compensated);

  double max_e = 0.0, max_u = 0.0, max_w = 0.0;
  bool events = false;
  for (const auto& s : run.trajectory.samples) {
    max_e = std::max(max_e, std::abs(tracking_err(s)));
    max_u = std::max(max_u, std::abs(s.u));
    max_w = std::max(max_w, s.w_norm);
    events = events || !s.events.empty();
  }
  const bool ok = run.metrics.bounded && !run.trajectory.terminal && !events && std::isfinite(max_e) &&
                  max_e < err_cap && max_u < u_limit && max_w < w_cap;
  return {ok, fmt("events = %s; max |e| = %.3g (cap %.2g), max |u| = %.3g (cap %.0f), max ||w|| = %.3g (cap %.0f)",
                  events ? "yes" : "none", max_e, err_cap, max_u, u_limit, max_w, w_cap)};
}

// Criterion 7: RK4 global error on y' = y at t = 1.
Verdict integrator_order() {
  const Derivative deriv = [](std::span<const double> y, double) { return std::vector<double>{y[0]}; };
  auto global_error = [&](double dt) {
    std::vector<double> y{1.0};
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < steps; ++i) y = rk4_step(deriv, y, i * dt, dt);
    return std::abs(y[0] - std::exp(1.0));
  };
  const double e1 = global_error(1e-2), e2 = global_error(5e-3), e3 = global_error(2.5e-3);
  const double r1 = e1 / e2, r2 = e2 / e3;
  const bool ok = r1 >= 14.0 && r1 <= 18.0 && r2 >= 14.0 && r2 <= 18.0;
  return {ok, fmt("errors %.3g, %.3g, %.3g; ratios %.3f, %.3f (want [14, 18])", e1, e2, e3, r1, r2)};
}

// Criterion 8: zero-weight network reduces exactly to the baseline law.
Verdict reduction_identity() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> order(1, 5), neurons(1, 15);
  std::uniform_real_distribution<double> lam(0.1, 10.0), mag(0.05, 20.0);
  std::size_t mismatches = 0;
  const std::size_t trials = 10000;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = order(rng);
    const double lambda = lam(rng);
    std::vector<double> x(n), xd(n);
    for (auto& v : x) v = 10.0 * unit(rng);
    for (auto& v : xd) v = 10.0 * unit(rng);
    const double xd_n = 10.0 * unit(rng);
    const double f = 50.0 * unit(rng);
    const double b = (unit(rng) < 0.0 ? -1.0 : 1.0) * mag(rng);
    const double b_min = std::abs(b) * 0.5;
    std::optional<double> u_limit;
    if (unit(rng) > 0.0) u_limit = mag(rng) * 10.0;

    const auto gains = binomial_gains(n, lambda);
    const auto net = default_network(neurons(rng), mag(rng), mag(rng));
    const auto base = ControllerState::baseline(gains, u_limit);
    const auto comp = ControllerState::compensated(gains, net, u_limit);
    const StateVector xs(x), xds(xd);
    const auto a = fl_control(base, xs, xds, xd_n, f, b, b_min);
    const auto c = nn_fl_control(comp, xs, xds, xd_n, f, b, b_min, lambda);
    if (std::memcmp(&a.u, &c.u, sizeof(double)) != 0 || a.saturated != c.saturated) ++mismatches;
  }
  return {mismatches == 0, fmt("%zu mismatches in %zu randomized cases", mismatches, trials)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Criterion 9: two compare runs of the golden scenario are byte-identical.
Verdict determinism() {
  const auto cfg = load_config(std::string(NEUROFL_TEST_DATA_DIR) + "/data/golden_compare.json");
  const auto root = fs::temp_directory_path() / "neurofl_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream sink;
  for (const char* run : {"a", "b"}) {
    fs::create_directories(root / run);
    if (cmd_compare(cfg, root / run, sink) != kExitOk) return {false, std::string("compare run ") + run + " failed"};
  }
  bool same = true;
  std::size_t bytes = 0;
  for (const char* f : {"golden_baseline.csv", "golden_compensated.csv", "golden_compare.json"}) {
    const auto a = slurp(root / "a" / f), b = slurp(root / "b" / f);
    same = same && !a.empty() && a == b;
    bytes += a.size();
  }
  return {same, fmt("%s across %zu bytes of output", same ? "identical" : "DIFFERENT", bytes)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"1 pole placement", pole_placement},
      {"2 nominal convergence", nominal_convergence},
      {"3 baseline steady state", baseline_steady_state},
      {"4 compensation benefit", compensation_benefit},
      {"5 lyapunov descent", lyapunov_descent},
      {"6 boundedness", boundedness},
      {"7 integrator order", integrator_order},
      {"8 reduction identity", reduction_identity},
      {"9 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
