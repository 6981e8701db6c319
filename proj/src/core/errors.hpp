#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nscert {

// Invalid geometric input (degenerate box, bad cell counts, ...).
class InvalidDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation
// (point outside the reference tet, time outside [0,T], ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Expression text rejected by the grammar. `position` is the 0-based byte
// offset where parsing failed.
class ExprParseError : public std::runtime_error {
 public:
  ExprParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Expression evaluation failure (division by zero at a point, ...).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested derivative or norm not available for this field.
class UnsupportedExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration file problems: unknown key, type mismatch, constraint
// violation. Fatal.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear solver breakdown or residual above tolerance. Carries whatever
// residual history the solve produced.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residual_history() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// Data incompatible with a space requirement (nonzero trace where a
// zero-trace field is required).
class IncompatibleDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nscert
