#pragma once

#include <stdexcept>
#include <string>

namespace nfuq {

/// Bad user input: out-of-range parameters, malformed files, unknown keys.
/// Maps to CLI exit status 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure carrying the offending line (1-based).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A solver could not complete (non-convergence, step-size underflow).
/// Maps to CLI exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nfuq
