#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gca {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A counter or machine description was used in a way its definition forbids.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// An input string contains a symbol outside the machine alphabet.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The engine was handed a configuration that cannot belong to the machine.
class EngineError : public Error {
 public:
  using Error::Error;
};

/// Malformed text (machine files, rendered values). `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Findings of a validation pass. Violations make the subject invalid; warnings are diagnostics.
struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return violations.empty(); }

  void merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  }
};

}  // namespace gca
