#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace meval {

// Base for all recoverable scoring failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (segment files, labels, words).
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// ORC needs a global utterance order, which only begin times provide.
class MissingBeginTime : public InputError {
 public:
  using InputError::InputError;
};

// A solver refused an instance because its state space or enumeration count
// is larger than the configured limit.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t required, std::size_t limit)
      : Error(what + " (required " + std::to_string(required) + ", limit " +
              std::to_string(limit) + ")"),
        required_(required),
        limit_(limit) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t required_;
  std::size_t limit_;
};

}  // namespace meval
