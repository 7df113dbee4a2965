#pragma once

#include <stdexcept>
#include <string>

namespace lapgraph {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or malformed input (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A truncated series evaluation whose tail bound is not small enough.
class ConvergenceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Work exceeds a configured enumeration budget (CLI exit code 3).
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::string flag)
      : Error(what + " (raise with " + flag + ")"), flag_(std::move(flag)) {}

  const std::string& flag() const noexcept { return flag_; }

 private:
  std::string flag_;
};

/// Two independent computations of the same quantity disagree (CLI exit code 4).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Default enumeration budgets. The CLI exposes each as an override flag.
struct Budgets {
  int max_partition_k = 10;   // --max-k
  int max_weight_k = 6;       // --max-k
  int max_diagram_slots = 12; // --max-slots
  int max_histogram_n = 7;    // --max-n
  int max_order = 400;        // --max-order
};

}  // namespace lapgraph
