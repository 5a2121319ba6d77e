#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alphaeff {

/// Argument outside the mathematical domain of an operation (k < 2 for
/// alpha_eff, non-positive times, invalid model parameters, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Malformed measurement or scenario input. `line()` is 1-based, 0 when the
/// error is not tied to a line (JSON inputs, structural problems).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &message, std::size_t line = 0)
      : std::runtime_error(line == 0 ? message
                                     : "line " + std::to_string(line) + ": " +
                                           message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Failure to read or write a file or stream.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace alphaeff
