#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtd {

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed DIMACS, CSV or manifest input. Carries the 1-based line number
/// when one is known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

  /// Same error with `context` (e.g. a file name) in front of the message.
  ParseError with_context(const std::string& context) const { return ParseError(context + ": " + what(), line_, 0); }

 private:
  ParseError(const std::string& full_message, std::size_t line, int) : std::runtime_error(full_message), line_(line) {}

  std::size_t line_;
};

/// A statistical or analytical computation could not produce a result from
/// the data it was given (no successes, sample too small, fit failed, ...).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace rtd
