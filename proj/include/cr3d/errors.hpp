#pragma once

#include <stdexcept>
#include <string>

namespace cr3d {

/// Invalid degree, index range, multiplicity request or similar caller error.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point passed to an evaluator lies outside the admissible domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class MeshValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative or direct solve did not reach the requested accuracy.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cr3d
