#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text (carries a 1-based line number when known).
struct ParseError : Error {
  ParseError(const std::string& msg, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_number(line) {}
  long line_number;
};

/// Instance violates a model invariant (demand sum, self-loop, ...).
struct ValidationError : Error {
  using Error::Error;
};

/// A derived quantity does not fit the supported integer width.
struct ArithmeticError : Error {
  using Error::Error;
};

/// Caller broke a documented precondition.
struct ContractViolation : Error {
  using Error::Error;
};

/// Floating-point state left the region where the method is trustworthy.
struct NumericAlarm : Error {
  using Error::Error;
};

/// A solver gave up (iteration budget, missing fallback).
struct SolverFailure : Error {
  using Error::Error;
};

/// A condition that the surrounding theory rules out; indicates a bug.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace mcf
