#pragma once

#include <stdexcept>

namespace dpbandit {

// Argument outside the mathematical domain of an operation (reward > 1, delta >= 1/2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent or unsupported configuration (bad horizon, K^T over the audit limit, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The privacy estimator cannot produce a value from the histograms it was given.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpbandit
