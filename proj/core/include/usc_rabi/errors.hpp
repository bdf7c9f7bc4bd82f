#pragma once

#include <stdexcept>
#include <string>

namespace usc_rabi {

// Failure classes map one-to-one onto the CLI exit codes (2..5).

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, std::string text = {})
      : std::runtime_error(what), line_(line), text_(std::move(text)) {}
  int line() const { return line_; }
  const std::string& text() const { return text_; }

 private:
  int line_;
  std::string text_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace usc_rabi
