#pragma once

#include <stdexcept>
#include <string>

namespace specpert {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: non-finite entries, bad dimensions, out-of-range knobs.
class InputError : public Error {
 public:
  using Error::Error;
};

// An iterative kernel did not converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A linear system is singular to working precision.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A mathematical hypothesis of an operation does not hold for the inputs
// (point too close to the spectrum, operands that do not commute, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A structured object failed its invariant check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace specpert
