#pragma once

#include <stdexcept>
#include <string>

namespace dualdescent {

// Structural problems: mismatched block dimensions, wrong vector lengths.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid scalar parameters (eta <= 0, rho <= beta, omega < 4, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad run configuration or schema (unknown JSON fields, missing oracles).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A lemma-derived runtime monitor failed. Carries the offending iteration.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(const std::string& monitor, long iteration, const std::string& what)
      : std::runtime_error("[" + monitor + "] iteration " + std::to_string(iteration) + ": " + what),
        monitor(monitor),
        iteration(iteration) {}

  std::string monitor;
  long iteration;
};

// The inner descent-solution oracle could not meet its contract.
class OracleFailure : public std::runtime_error {
 public:
  explicit OracleFailure(const std::string& what) : std::runtime_error(what) {}
};

// Paired SDD-ADMM / penalty-ADMM trajectories drifted apart.
class EquivalenceViolation : public std::runtime_error {
 public:
  explicit EquivalenceViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dualdescent
