#include <doctest.h>

#include <cmath>
#include <random>

#include "neurofl/controller.hpp"
#include "neurofl/errors.hpp"

using namespace neurofl;

namespace {

ControllerState baseline2(double lambda = 2.0) { return ControllerState::baseline(binomial_gains(2, lambda)); }

}  // namespace

TEST_CASE("fl_control") {
  const StateVector zero = StateVector::zeros(2);
  CHECK(fl_control(baseline2(), zero, zero, 0.0, 0.0, 1.0, 0.5).u == 0.0);
  CHECK(fl_control(baseline2(), zero, zero, 2.0, -3.0, 2.0, 0.5).u == 2.5);

  // k = [4, 4], x̃ = [1, 0.5]  ->  u = -(4 * 1 + 4 * 0.5) = -6
  const auto out = fl_control(baseline2(), StateVector({1.0, 0.5}), zero, 0.0, 0.0, 1.0, 0.5);
  CHECK(out.u == -6.0);
  CHECK_FALSE(out.saturated);

  CHECK_THROWS_AS(fl_control(baseline2(), zero, zero, 0.0, 0.0, 0.1, 0.5), ControllabilityFault);
  CHECK_THROWS_AS(fl_control(baseline2(), StateVector::zeros(3), StateVector::zeros(3), 0.0, 0.0, 1.0, 0.5),
                  DomainError);
}

TEST_CASE("fl_control saturation") {
  const auto ctrl = ControllerState::baseline(binomial_gains(2, 2.0), 5.0);
  const auto out = fl_control(ctrl, StateVector({1.0, 0.5}), StateVector::zeros(2), 0.0, 0.0, 1.0, 0.5);
  CHECK(out.u == -5.0);
  CHECK(out.saturated);
  CHECK_THROWS_AS(ControllerState::baseline(binomial_gains(2, 2.0), 0.0), DomainError);
}

TEST_CASE("feedback term is affine in each error component with slope -k_i / b") {
  const auto ctrl = ControllerState::baseline(binomial_gains(3, 1.5));
  const auto k = ctrl.gains().gains();
  const double b = 0.8;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    const StateVector xd({u(rng), u(rng), u(rng)});
    const double f = u(rng), xdn = u(rng);
    for (std::size_t i = 0; i < 3; ++i) {
      auto bumped = x;
      bumped[i] += 1.0;
      const double slope =
          fl_control(ctrl, StateVector(bumped), xd, xdn, f, b, 0.1).u - fl_control(ctrl, StateVector(x), xd, xdn, f, b, 0.1).u;
      CHECK(slope == doctest::Approx(-k[i] / b).epsilon(1e-12));
    }
  }
}

TEST_CASE("nn_fl_control") {
  const StateVector zero = StateVector::zeros(2);

  SUBCASE("zero weights reproduce fl_control exactly") {
    const auto comp = ControllerState::compensated(binomial_gains(2, 2.0), default_network(5, 2.0, 1.0));
    const StateVector x({0.3, -0.4}), xd({0.1, 0.2});
    CHECK(nn_fl_control(comp, x, xd, 0.7, -1.1, 1.3, 0.5, 2.0).u == fl_control(baseline2(), x, xd, 0.7, -1.1, 1.3, 0.5).u);
  }

  SUBCASE("d_hat = 1 with b = 2 gives u = -0.5") {
    RbfNetwork::Params p;
    p.centers = {0.0};
    p.widths = {1.0};
    p.weights = {1.0};
    const auto comp = ControllerState::compensated(binomial_gains(2, 2.0), RbfNetwork(p));
    const auto out = nn_fl_control(comp, zero, zero, 0.0, 0.0, 2.0, 0.5, 2.0);
    CHECK(out.s == 0.0);
    CHECK(out.d_hat == 1.0);
    CHECK(out.u == -0.5);
  }

  SUBCASE("zero error gives s = 0 for any order and lambda") {
    for (std::size_t n = 1; n <= 4; ++n) {
      for (double lambda : {0.3, 2.0, 9.0}) {
        const auto comp = ControllerState::compensated(binomial_gains(n, lambda), default_network(3, 1.0, 1.0));
        const StateVector x = StateVector(std::vector<double>(n, 0.25));
        CHECK(nn_fl_control(comp, x, x, 0.0, 0.0, 1.0, 0.5, lambda).s == 0.0);
      }
    }
  }

  SUBCASE("missing network is a configuration error") {
    CHECK_THROWS_AS(nn_fl_control(baseline2(), zero, zero, 0.0, 0.0, 1.0, 0.5, 2.0), ConfigError);
  }
}

TEST_CASE("control_step") {
  const auto plant = pendulum_plant(1.0, 1.0, 0.1, 9.81);

  SUBCASE("baseline leaves the controller unchanged") {
    const auto ctrl = baseline2();
    const auto step = control_step(ctrl, plant, StateVector({0.2, 0.1}), StateVector({0.0, 0.0}), 0.0, 0.0, 1e-3);
    CHECK(step.next == ctrl);
    CHECK(step.log.w_norm == 0.0);
  }

  SUBCASE("compensated with s = 0 keeps the weights and matches baseline") {
    const auto comp = ControllerState::compensated(binomial_gains(2, 2.0), default_network(5, 2.0, 4.0));
    const StateVector x({0.4, -0.2});
    const auto step = control_step(comp, plant, x, x, 1.5, 0.3, 1e-3);
    const auto base = control_step(baseline2(), plant, x, x, 1.5, 0.3, 1e-3);
    CHECK(step.u == base.u);
    CHECK(step.log.s == 0.0);
    CHECK(step.next.network() == comp.network());
  }

  SUBCASE("one-neuron network, full triple by hand") {
    // Unit pendulum without damping, x = [0, 0], x_d = [0.5, 0.25], x_d'' = 1, λ = 2.
    //   x̃ = [-0.5, -0.25], s = 2 * (-0.5) + (-0.25) = -1.25
    //   φ(s) = exp(-(-1.25)^2 / 2) with μ = 0, σ = 1; d̂ = 2 φ
    //   u = (-f + x_d'' - (4 * -0.5 + 4 * -0.25) - d̂) / b = 1 + 3 - d̂   (f = 0, b = 1)
    //   w' = 2 + η s φ dt with η = 3, dt = 0.01
    const auto unit = pendulum_plant(1.0, 1.0, 0.0, 9.81);
    RbfNetwork::Params p;
    p.centers = {0.0};
    p.widths = {1.0};
    p.weights = {2.0};
    p.learning_rate = 3.0;
    const auto comp = ControllerState::compensated(binomial_gains(2, 2.0), RbfNetwork(p));
    const auto step = control_step(comp, unit, StateVector({0.0, 0.0}), StateVector({0.5, 0.25}), 1.0, 0.0, 0.01);

    const double phi = std::exp(-1.25 * 1.25 / 2.0);
    CHECK(step.log.s == -1.25);
    CHECK(step.log.d_hat == doctest::Approx(2.0 * phi).epsilon(1e-15));
    CHECK(step.u == doctest::Approx(4.0 - 2.0 * phi).epsilon(1e-15));
    CHECK(step.log.w_norm == 2.0);
    CHECK(step.next.network()->weights()[0] == doctest::Approx(2.0 + 3.0 * -1.25 * phi * 0.01).epsilon(1e-15));
  }

  SUBCASE("faults carry the sample time") {
    PlantModel weak = plant;
    weak.b_min = 10.0;
    try {
      control_step(baseline2(), weak, StateVector({0.0, 0.0}), StateVector({0.0, 0.0}), 0.0, 4.2, 1e-3);
      FAIL("expected a fault");
    } catch (const ControllabilityFault& fault) {
      CHECK(fault.time() == 4.2);
    }
  }

  CHECK_THROWS_AS(control_step(baseline2(), plant, StateVector::zeros(2), StateVector::zeros(2), 0.0, 0.0, 0.0),
                  DomainError);
}

TEST_CASE("controller construction") {
  CHECK(ControllerState::baseline(GainVector::from_gains({6.0, 5.0}, 2.0)).mode() == ControlMode::baseline);
  CHECK(control_mode_from_string("compensated") == ControlMode::compensated);
  CHECK(to_string(ControlMode::baseline) == "baseline");
  CHECK_THROWS_AS(control_mode_from_string("fuzzy"), DomainError);
}
