#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embedsim {

// Base class for all errors raised by the library. The CLI maps every
// Error to exit code 2 (input error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// An enumeration would exceed the configured number of atoms.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (empty antecedent for a
// pooling function that needs one, unknown fixture, infeasible witness...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace embedsim
