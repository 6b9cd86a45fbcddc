#pragma once

#include <stdexcept>
#include <string>

namespace psi_spectral {

/// Malformed input text (operator files, coefficient CSVs, CLI values).
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A documented precondition was violated (level mismatch, bad truncation, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the domain of a function (|theta| >= pi, singular point).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical solver failure.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace psi_spectral
