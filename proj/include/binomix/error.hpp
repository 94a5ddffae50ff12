#pragma once

#include <stdexcept>
#include <string>

namespace binomix {

// Input data violates a model invariant (empty sample, successes > trials,
// positivity, malformed rows). The CLI maps this to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical procedure failed to reach its postcondition (non-convergence,
// degenerate quantities). The CLI maps this to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations on arguments are reported as std::invalid_argument.

}  // namespace binomix
