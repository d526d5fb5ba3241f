#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sladm {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or name-resolution failure while parsing an expression.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A function produced a non-finite value (or failed) at a finite abscissa.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& message, double where)
      : Error(message + " at x = " + std::to_string(where)), where_(where) {}

  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// A bracketing root search was started on an interval without a sign change,
/// or a bracket could not be grown within budget.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// A numerical test could not reach a decision within its budget.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sladm
