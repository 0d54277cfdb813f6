#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bneck {

// Argument outside an operation's domain (traveler index, time, bounds).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Instance or configuration violates the model's standing assumptions.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> violations)
      : std::runtime_error(what), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Derivative requested at a kink; callers must ask for a one-sided value.
class NonDifferentiablePoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No admissible scaling exists for a requested perturbation.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dynamics step could not be made FIFO-feasible.
class StepInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bneck
