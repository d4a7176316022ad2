#pragma once

#include <stdexcept>
#include <string>

namespace nac {

// Error taxonomy shared by every module. All derive from std::runtime_error or
// std::invalid_argument so callers that only care about "something failed"
// can catch the standard bases.

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Calling an operation in the wrong lifecycle state (e.g. step after done).
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// Operation on an empty or otherwise unusable container.
struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nac
