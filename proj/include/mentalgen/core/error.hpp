#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mentalgen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numeric input contained NaN or infinity.
class NonFiniteError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Malformed input file. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Lookup of an unknown identifier (session, job, image).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// An operation is not allowed in the current state (e.g. writing to a
/// finalized session).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Validation failure tied to a named field of a request document.
class FieldError : public InvalidArgument {
 public:
  FieldError(std::string field, const std::string& what)
      : InvalidArgument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The operation was cancelled through its stop token.
class CancelledError : public Error {
 public:
  CancelledError() : Error("cancelled") {}
};

}  // namespace mentalgen
