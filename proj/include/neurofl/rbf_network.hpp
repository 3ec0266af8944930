#pragma once

#include <optional>
#include <span>
#include <vector>

namespace neurofl {

/// φ = exp(-(s - μ)² / (2σ²)). Throws DomainError for σ <= 0.
double gaussian_basis(double s, double mu, double sigma);

/// Single-input Gaussian RBF network d̂(s) = Σ w_i φ_i(s) with an online
/// weight adaptation law. Values are immutable; updates return a new network.
class RbfNetwork {
 public:
  struct Params {
    std::vector<double> centers;  // strictly increasing
    std::vector<double> widths;   // > 0
    std::vector<double> weights;
    double learning_rate = 1.0;   // η > 0
    double leakage = 0.0;         // κ >= 0 (σ-modification)
    std::optional<double> weight_cap;  // ‖w‖∞ bound, > 0
  };

  explicit RbfNetwork(Params params);

  std::size_t neuron_count() const noexcept { return p_.centers.size(); }
  std::span<const double> centers() const noexcept { return p_.centers; }
  std::span<const double> widths() const noexcept { return p_.widths; }
  std::span<const double> weights() const noexcept { return p_.weights; }
  double learning_rate() const noexcept { return p_.learning_rate; }
  double leakage() const noexcept { return p_.leakage; }
  const std::optional<double>& weight_cap() const noexcept { return p_.weight_cap; }

  RbfNetwork with_weights(std::vector<double> weights) const;

  double weight_norm() const;      // Euclidean
  double weight_max_abs() const;   // ‖w‖∞

  bool operator==(const RbfNetwork& other) const;

 private:
  Params p_;
};

std::vector<double> activations(const RbfNetwork& net, double s);

double network_output(const RbfNetwork& net, double s);

struct AdaptResult {
  RbfNetwork network;
  bool cap_hit = false;  // some weight was clamped to the configured cap
};

/// One explicit Euler step of  ẇ_i = η s φ_i(s) − κ w_i.
/// Throws DomainError for dt <= 0 and DivergenceFault for non-finite s.
AdaptResult adapt_weights(const RbfNetwork& net, double s, double dt);

/// Centers evenly spaced on [-s_range, s_range], widths equal to the spacing
/// (s_range for a single neuron), zero weights, no leakage.
RbfNetwork default_network(std::size_t neuron_count, double s_range, double eta);

}  // namespace neurofl
