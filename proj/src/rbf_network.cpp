#include "neurofl/rbf_network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurofl/errors.hpp"

namespace neurofl {

double gaussian_basis(double s, double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian width sigma must be > 0");
  const double z = s - mu;
  return std::exp(-(z * z) / (2.0 * sigma * sigma));
}

RbfNetwork::RbfNetwork(Params params) : p_(std::move(params)) {
  const std::size_t n = p_.centers.size();
  if (n == 0) throw DomainError("RBF network needs at least one neuron");
  if (p_.widths.size() != n || p_.weights.size() != n) {
    throw DomainError("RBF network centers, widths and weights must have equal length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p_.centers[i]) || !std::isfinite(p_.weights[i])) {
      throw DomainError("RBF network centers and weights must be finite");
    }
    if (!(p_.widths[i] > 0.0) || !std::isfinite(p_.widths[i])) {
      throw DomainError("RBF network widths must be finite and > 0");
    }
    if (i > 0 && !(p_.centers[i] > p_.centers[i - 1])) {
      throw DomainError("RBF network centers must be strictly increasing");
    }
  }
  if (!(p_.learning_rate > 0.0) || !std::isfinite(p_.learning_rate)) {
    throw DomainError("learning rate eta must be > 0");
  }
  if (!(p_.leakage >= 0.0) || !std::isfinite(p_.leakage)) throw DomainError("leakage kappa must be >= 0");
  if (p_.weight_cap && !(*p_.weight_cap > 0.0)) throw DomainError("weight cap must be > 0");
}

RbfNetwork RbfNetwork::with_weights(std::vector<double> weights) const {
  Params p = p_;
  p.weights = std::move(weights);
  return RbfNetwork(std::move(p));
}

double RbfNetwork::weight_norm() const {
  double acc = 0.0;
  for (double w : p_.weights) acc += w * w;
  return std::sqrt(acc);
}

double RbfNetwork::weight_max_abs() const {
  double m = 0.0;
  for (double w : p_.weights) m = std::max(m, std::abs(w));
  return m;
}

bool RbfNetwork::operator==(const RbfNetwork& other) const {
  return p_.centers == other.p_.centers && p_.widths == other.p_.widths && p_.weights == other.p_.weights &&
         p_.learning_rate == other.p_.learning_rate && p_.leakage == other.p_.leakage &&
         p_.weight_cap == other.p_.weight_cap;
}

std::vector<double> activations(const RbfNetwork& net, double s) {
  const auto mu = net.centers();
  const auto sigma = net.widths();
  std::vector<double> phi(net.neuron_count());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = gaussian_basis(s, mu[i], sigma[i]);
  return phi;
}

double network_output(const RbfNetwork& net, double s) {
  const auto mu = net.centers();
  const auto sigma = net.widths();
  const auto w = net.weights();
  double out = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) out += w[i] * gaussian_basis(s, mu[i], sigma[i]);
  return out;
}

AdaptResult adapt_weights(const RbfNetwork& net, double s, double dt) {
  if (!(dt > 0.0)) throw DomainError("adaptation step dt must be > 0");
  if (!std::isfinite(s)) throw DivergenceFault("non-finite filtered error fed to weight adaptation");

  const auto phi = activations(net, s);
  const auto w = net.weights();
  const double eta = net.learning_rate();
  const double kappa = net.leakage();

  std::vector<double> next(w.size());
  bool cap_hit = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double wi = w[i] + dt * (eta * s * phi[i] - kappa * w[i]);
    if (const auto& cap = net.weight_cap(); cap && std::abs(wi) > *cap) {
      wi = std::copysign(*cap, wi);
      cap_hit = true;
    }
    if (!std::isfinite(wi)) throw DivergenceFault("network weight became non-finite");
    next[i] = wi;
  }
  return {net.with_weights(std::move(next)), cap_hit};
}

RbfNetwork default_network(std::size_t neuron_count, double s_range, double eta) {
  if (neuron_count == 0) throw DomainError("neuron_count must be >= 1");
  if (!(s_range > 0.0) || !std::isfinite(s_range)) throw DomainError("s_range must be > 0");

  RbfNetwork::Params p;
  p.learning_rate = eta;
  if (neuron_count == 1) {
    p.centers = {0.0};
    p.widths = {s_range};
  } else {
    const double spacing = 2.0 * s_range / static_cast<double>(neuron_count - 1);
    p.centers.resize(neuron_count);
    for (std::size_t i = 0; i < neuron_count; ++i) {
      p.centers[i] = -s_range + spacing * static_cast<double>(i);
    }
    p.centers.back() = s_range;
    p.widths.assign(neuron_count, spacing);
  }
  p.weights.assign(neuron_count, 0.0);
  return RbfNetwork(std::move(p));
}

}  // namespace neurofl
