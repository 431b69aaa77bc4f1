#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morphdecomp {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad axis sets, out-of-range parameters, malformed options.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A distribution that does not sum to one or has negative mass.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// A perturbation outside the feasible gamma rectangle, or a KL term with
// support mismatch.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// An optimizer produced a component that is negative beyond the clamp
// tolerance.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace morphdecomp
