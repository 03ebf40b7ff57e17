#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causal {

// 1-based line/column into a theory file; {0, 0} when unknown.
struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;

  bool known() const { return line != 0; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message)
      : Error(format(span, message)), span_(span), message_(message) {}

  SourceSpan span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  static std::string format(SourceSpan span, const std::string& message) {
    if (!span.known()) return message;
    return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message;
  }

  SourceSpan span_;
  std::string message_;
};

// Head shape or rule kind outside what the translation handles.
class NormalizeError : public Error {
 public:
  using Error::Error;
};

class GroundingError : public Error {
 public:
  using Error::Error;
};

// Enumeration refused: too many ground atoms for brute force.
class GuardrailError : public Error {
 public:
  using Error::Error;
};

class EmitError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace causal
