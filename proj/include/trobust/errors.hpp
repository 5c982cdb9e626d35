#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trobust {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied input that violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SingularDesignError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DegenerateRegressorsError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DegenerateConfigurationError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class IndexOutOfRangeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InvalidTailIndexError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InvalidDofError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A function evaluation produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class InitializationError : public Error {
 public:
  using Error::Error;
};

/// The analytical conditions for an object to exist do not hold, e.g. a
/// limiting posterior whose normalizing integral diverges.
class ConditionViolatedError : public Error {
 public:
  using Error::Error;
};

class NonNormalizableError : public ConditionViolatedError {
 public:
  using ConditionViolatedError::ConditionViolatedError;
};

/// Malformed input file. Row and column are 1-based file coordinates.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace trobust
