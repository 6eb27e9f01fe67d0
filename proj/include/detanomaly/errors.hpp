#pragma once

#include <stdexcept>
#include <string>

namespace detanomaly {

/// Invalid ProblemConfig or scenario block; names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Operation requested on an operator kind that does not support it.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical failure: singular determinant, eigenvalue on the cut,
/// non-summable remainder, unconverged ladder.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant of the symbol algebra or continuation was violated.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace detanomaly
