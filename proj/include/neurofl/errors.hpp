#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace neurofl {

/// Violated precondition on an argument (bad order, non-positive λ, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// |b(x,t)| dropped below the plant's b_min guard.
class ControllabilityFault : public std::runtime_error {
 public:
  ControllabilityFault(const std::string& what, std::vector<double> state, double time)
      : std::runtime_error(what), state_(std::move(state)), time_(time) {}

  const std::vector<double>& state() const noexcept { return state_; }
  double time() const noexcept { return time_; }

 private:
  std::vector<double> state_;
  double time_;
};

/// Non-finite or runaway values inside the closed loop.
class DivergenceFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration. `key` names the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace neurofl
