#pragma once

// State and error algebra for plants in companion form
//   x^(n) = f(x, t) + b(x, t) u + d,   x = [x, x', ..., x^(n-1)].

#include <cstdint>
#include <span>
#include <vector>

namespace neurofl {

/// The output x and its first n-1 time derivatives; values()[i] = x^(i).
/// Also used for references x_d and tracking errors x - x_d.
class StateVector {
 public:
  /// Throws DomainError on an empty or non-finite vector.
  explicit StateVector(std::vector<double> values);

  static StateVector zeros(std::size_t order);

  std::size_t order() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const StateVector&) const = default;

 private:
  std::vector<double> values_;
};

/// Monic characteristic polynomial, coefficients stored by descending power:
/// coefficients()[0] = 1 multiplies p^n, coefficients()[n] is the constant term.
class CharPolynomial {
 public:
  explicit CharPolynomial(std::vector<double> descending);

  std::size_t degree() const noexcept { return coefficients_.size() - 1; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }

 private:
  std::vector<double> coefficients_;
};

/// Feedback gains k_0 ... k_{n-1}; gains()[i] multiplies x̃^(i).
class GainVector {
 public:
  /// Arbitrary gains; rejected unless p^n + k_{n-1} p^{n-1} + ... + k_0 is Hurwitz.
  /// `lambda` is kept as the filter constant for the combined error.
  static GainVector from_gains(std::vector<double> gains, double lambda);

  double lambda() const noexcept { return lambda_; }
  std::size_t order() const noexcept { return gains_.size(); }
  std::span<const double> gains() const noexcept { return gains_; }
  double operator[](std::size_t i) const { return gains_[i]; }

  /// p^n + k_{n-1} p^{n-1} + ... + k_0
  CharPolynomial characteristic_polynomial() const;

  bool operator==(const GainVector&) const = default;

 private:
  friend GainVector binomial_gains(std::size_t, double);
  GainVector(std::vector<double> gains, double lambda) : gains_(std::move(gains)), lambda_(lambda) {}

  std::vector<double> gains_;
  double lambda_;
};

inline constexpr std::uint64_t kMaxBinomialOrder = 62;

/// n! / ((n-i)! i!) in exact integer arithmetic. Requires i <= n <= 62.
std::uint64_t binomial_coefficient(std::uint64_t n, std::uint64_t i);

/// k_i = C(n, i) λ^(n-i), which places every closed-loop pole at -λ.
GainVector binomial_gains(std::size_t n, double lambda);

/// Routh-Hurwitz test: true iff every root has strictly negative real part.
/// A zero pivot in the first column counts as unstable.
bool hurwitz_check(const CharPolynomial& poly);

/// x - x_d, componentwise.
StateVector tracking_error(const StateVector& x, const StateVector& x_d);

/// s = (d/dt + λ)^(n-1) x̃ = Σ_i C(n-1, i) λ^(n-1-i) x̃^(i).
double filtered_error(const StateVector& error, double lambda);

}  // namespace neurofl
