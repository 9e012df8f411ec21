#pragma once

#include <stdexcept>
#include <string>

namespace tinygan {

/// Base class for all tinygan errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to a pure operation (non-finite input, negative time, T <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A config or derived quantity violates a stated invariant. The message names it.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Config text could not be parsed. Message carries file:line and the offending key.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line) : Error(message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Trajectory does not extend far enough past the transient cut for steady-state analysis.
class InsufficientWindowError : public Error {
 public:
  using Error::Error;
};

/// Phase of a zero-amplitude oscillation requested (K = 0).
class UndefinedPhaseError : public Error {
 public:
  using Error::Error;
};

/// Too few non-divergent runs to estimate a convergence order.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while writing or reading an artifact.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tinygan
