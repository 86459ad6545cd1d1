#pragma once

#include <stdexcept>
#include <string>

namespace netsub {

/// Precondition violations on user-supplied arguments (exit code 2 at the CLI).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation requested on a step schedule it is not defined for.
class UnsupportedSchedule : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The adversarial subgradient would leave the subdifferential of the u-node objective.
class InvalidAdversary : public std::runtime_error {
 public:
  InvalidAdversary(const std::string& what, long t) : std::runtime_error(what), t_(t) {}
  long t() const noexcept { return t_; }

 private:
  long t_;
};

/// A runtime invariant check failed (exit code 1 at the CLI).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netsub
