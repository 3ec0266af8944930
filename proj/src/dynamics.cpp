#include "neurofl/dynamics.hpp"

#include <cmath>
#include <string>

#include "neurofl/errors.hpp"

namespace neurofl {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be a finite value > 0, got " + std::to_string(lambda));
  }
}

}  // namespace

StateVector::StateVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("state vector order must be >= 1");
  if (!all_finite(values_)) throw DomainError("state vector entries must be finite");
}

StateVector StateVector::zeros(std::size_t order) {
  return StateVector(std::vector<double>(order, 0.0));
}

CharPolynomial::CharPolynomial(std::vector<double> descending) : coefficients_(std::move(descending)) {
  if (coefficients_.size() < 2) throw DomainError("characteristic polynomial must have degree >= 1");
  if (!all_finite(coefficients_)) throw DomainError("polynomial coefficients must be finite");
  if (coefficients_.front() != 1.0) throw DomainError("characteristic polynomial must be monic");
}

GainVector GainVector::from_gains(std::vector<double> gains, double lambda) {
  require_positive_lambda(lambda);
  if (gains.empty()) throw DomainError("gain vector must be non-empty");
  GainVector out(std::move(gains), lambda);
  if (!hurwitz_check(out.characteristic_polynomial())) {
    throw DomainError("feedback gains do not give a Hurwitz characteristic polynomial");
  }
  return out;
}

CharPolynomial GainVector::characteristic_polynomial() const {
  const std::size_t n = gains_.size();
  std::vector<double> coeffs(n + 1);
  coeffs[0] = 1.0;
  // coefficient of p^j sits at index n - j; k_j multiplies p^j
  for (std::size_t j = 0; j < n; ++j) coeffs[n - j] = gains_[j];
  return CharPolynomial(std::move(coeffs));
}

std::uint64_t binomial_coefficient(std::uint64_t n, std::uint64_t i) {
  if (n > kMaxBinomialOrder) {
    throw DomainError("binomial order " + std::to_string(n) + " exceeds the supported maximum of 62");
  }
  if (i > n) throw DomainError("binomial index i must satisfy i <= n");
  if (i > n - i) i = n - i;
  // After step j, result = C(n - i + j, j), so the division is exact. The product
  // can exceed 2^64 near C(62, 31), hence the wide intermediate.
  unsigned __int128 result = 1;
  for (std::uint64_t j = 1; j <= i; ++j) {
    result = result * (n - i + j) / j;
  }
  return static_cast<std::uint64_t>(result);
}

GainVector binomial_gains(std::size_t n, double lambda) {
  if (n == 0) throw DomainError("plant order n must be >= 1");
  require_positive_lambda(lambda);
  std::vector<double> gains(n);
  for (std::size_t i = 0; i < n; ++i) {
    gains[i] = static_cast<double>(binomial_coefficient(n, i)) * std::pow(lambda, static_cast<double>(n - i));
  }
  return GainVector(std::move(gains), lambda);
}

bool hurwitz_check(const CharPolynomial& poly) {
  const auto a = poly.coefficients();
  const std::size_t n = poly.degree();
  const std::size_t width = n / 2 + 1;

  std::vector<double> upper(width, 0.0);
  std::vector<double> lower(width, 0.0);
  for (std::size_t j = 0; 2 * j <= n; ++j) upper[j] = a[2 * j];
  for (std::size_t j = 0; 2 * j + 1 <= n; ++j) lower[j] = a[2 * j + 1];

  // Routh array, first column must stay strictly positive (leading entry is 1).
  for (std::size_t row = 1; row <= n; ++row) {
    if (!(lower[0] > 0.0)) return false;
    std::vector<double> next(width, 0.0);
    for (std::size_t j = 0; j + 1 < width; ++j) {
      next[j] = (lower[0] * upper[j + 1] - upper[0] * lower[j + 1]) / lower[0];
    }
    upper = std::move(lower);
    lower = std::move(next);
  }
  return true;
}

StateVector tracking_error(const StateVector& x, const StateVector& x_d) {
  if (x.order() != x_d.order()) {
    throw DomainError("tracking_error: order mismatch (" + std::to_string(x.order()) + " vs " +
                      std::to_string(x_d.order()) + ")");
  }
  std::vector<double> e(x.order());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = x[i] - x_d[i];
  return StateVector(std::move(e));
}

double filtered_error(const StateVector& error, double lambda) {
  require_positive_lambda(lambda);
  const std::size_t m = error.order() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    s += static_cast<double>(binomial_coefficient(m, i)) * std::pow(lambda, static_cast<double>(m - i)) * error[i];
  }
  return s;
}

}  // namespace neurofl
