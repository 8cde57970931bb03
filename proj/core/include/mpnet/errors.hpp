#pragma once

#include <stdexcept>
#include <string>

namespace mpnet {

/// Precondition violations: bad dimensions, out-of-range parameters, bad mode indices.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an evolution on a truncated Fock space loses more trace than allowed.
class LeakBudgetExceeded : public std::runtime_error {
 public:
  LeakBudgetExceeded(double leak, double budget);

  double leak() const noexcept { return leak_; }
  double budget() const noexcept { return budget_; }

 private:
  double leak_;
  double budget_;
};

/// Moment integration blew up or produced a covariance matrix violating the uncertainty relation.
class NumericalInstability : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnphysicalState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpnet
