#pragma once

#include <stdexcept>
#include <string>

namespace repeaterc {

// Raised when a computation cannot produce a finite, meaningful result:
// eigensolver non-convergence, a state that fails validation after
// propagation, or a zero reference denominator.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The undivided channel already yields a state with zero entanglement of
// formation, so the conjecture-based resource ratio has no finite value.
class SeparableReferenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace repeaterc
