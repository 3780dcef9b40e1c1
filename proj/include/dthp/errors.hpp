#pragma once

#include <stdexcept>
#include <string>

namespace dthp {

/// Kernel failed validation and cannot drive any computation.
class InvalidKernel : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A requested computation exceeds the configured enumeration or draw budget.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Internal consistency check failed; indicates a bug rather than bad input.
class InvariantViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace dthp
