#pragma once

#include <stdexcept>
#include <string>

namespace riskq {

// Precondition violated by the caller (argument outside the stated domain).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A constructed object failed its structural invariants.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An operation was asked of an object that does not support it
// (e.g. inverting a distortion function across a jump).
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature or series acceleration could not reach the requested accuracy.
// Carries the accuracy that was achieved.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved bound " + std::to_string(achieved) + ")"),
        achieved_bound(achieved) {}
  double achieved_bound;
};

// The risk is not a member of the space the requested functional lives on.
class NotInSpaceError : public std::runtime_error {
 public:
  explicit NotInSpaceError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver ran out of its iteration budget.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace riskq
