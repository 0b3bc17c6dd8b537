#pragma once

#include <stdexcept>
#include <string>

namespace floqlab {

// Invalid parameters or inputs outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Integrator or eigensolver output failed a numerical-quality gate
// (norm drift, unitarity defect, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Norm or unitarity drift exceeded its hard limit; the caller should raise
// steps_per_period.
class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace floqlab
