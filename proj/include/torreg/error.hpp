#pragma once

#include <stdexcept>
#include <string>

namespace torreg {

// Argument outside the mathematical domain of an operation (negative Bessel
// argument, square-angle input outside [0, pi], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A Moebius denominator vanished; only reachable near |beta1| = 1 or |gamma1| = 1.
class SingularInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition (too few rows, bad counts, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Every optimizer start failed to produce valid parameters.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Row and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::string column = {})
      : std::runtime_error(what), row_(row), column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace torreg
