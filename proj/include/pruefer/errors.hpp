#pragma once

#include <stdexcept>
#include <string>

namespace pruefer {

/// Argument outside the domain an operation is defined on (x outside [0,1], z <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation was called on input that violates a documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed user input (potential specs, mismatched eigenvalue lists, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The ODE integrator could not advance; `where()` is the abscissa it stalled at.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double x)
      : std::runtime_error(what + " (x = " + std::to_string(x) + ")"), x_(x) {}
  double where() const noexcept { return x_; }

 private:
  double x_;
};

/// Root bracketing or refinement failed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pruefer
