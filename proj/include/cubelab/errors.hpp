#pragma once

#include <stdexcept>

namespace cubelab {

/// An operation was called outside its domain (bad sizes, degenerate inputs).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A tensor computation would exceed the configured cell budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A measure, set or config file could not be read or parsed.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cubelab
