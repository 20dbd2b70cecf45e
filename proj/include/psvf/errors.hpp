#pragma once

#include <stdexcept>
#include <string>

namespace psvf {

/// Base of every library error. Numerical failures derive from NumericalError
/// so the CLI can map them to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class OffSigma : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Both the first and second Lie derivative vanish on one side.
class DegenerateTangency : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No return to the switching plane before the flight-time budget ran out.
class NoReturn : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Blowup : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RootNotBracketed : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotHyperbolicNumerically : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace psvf
