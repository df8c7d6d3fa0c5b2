#pragma once

#include <stdexcept>
#include <string>

namespace nmrsim {

// Malformed input text (molecule or pulse-program source).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  explicit ParseError(std::string msg) : std::runtime_error(std::move(msg)), line_(0), column_(0) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Structurally well-formed input that violates a semantic rule
// (unknown spin, bad event placement, inconsistent configuration).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// A numeric contract was violated at run time (non-unitary propagator,
// lost Hermiticity, trace drift).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

}  // namespace nmrsim
