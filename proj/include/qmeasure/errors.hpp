#pragma once

#include <stdexcept>
#include <string>

namespace qmeasure {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data rejected by a validation rule. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class DisjointnessError : public InputError {
 public:
  using InputError::InputError;
};

/// Hermiticity or normalization of a decoherence functional failed.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class PositivityError : public InputError {
 public:
  using InputError::InputError;
};

class NotStronglyPositiveError : public InputError {
 public:
  using InputError::InputError;
};

/// Eq.-2 style marginal conditions do not hold for a functional.
class MarginalConstraintError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidGramError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidBehaviorError : public InputError {
 public:
  using InputError::InputError;
};

class NoSignallingError : public InvalidBehaviorError {
 public:
  using InvalidBehaviorError::InvalidBehaviorError;
};

class OutsidePolytopeError : public InvalidBehaviorError {
 public:
  using InvalidBehaviorError::InvalidBehaviorError;
};

/// A condition that valid inputs can never trigger. Exit code 1 in the CLI.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmeasure
