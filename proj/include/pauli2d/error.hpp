#pragma once

#include <stdexcept>
#include <string>

namespace pauli2d {

// Invalid or inconsistent user input (field descriptors, scenario files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was asked for something outside its mathematical domain,
// e.g. a weak-coupling quantity for a field with nonzero flux.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (grid mismatch, bad index, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical routine did not reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what), achieved_(achieved), requested_(requested) {}
  explicit NumericalError(const std::string& what)
      : NumericalError(what, 0.0, 0.0) {}

  double achieved() const noexcept { return achieved_; }
  double requested() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

class DegenerateBasisError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pauli2d
