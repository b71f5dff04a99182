#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace toricq {

// Query outside the domain of an evaluator (boundary or exterior point, bad step).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed user input; `field()` names the offending JSON key or flag when known.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what, std::string field = {})
      : std::invalid_argument(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// An iterative solver gave up; carries the last residual it saw.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// A matrix that had to be inverted was numerically singular.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace toricq
