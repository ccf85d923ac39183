#pragma once

#include <stdexcept>
#include <string>

namespace tpp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A topology that cannot support the protocol (too few nodes, degree bounds
// never met).
class DegenerateTopologyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Requested more distinct destinations than the sender can reach.
class InsufficientFanoutError : public Error {
 public:
  using Error::Error;
};

// A closed-form bound evaluated outside the region where it is valid.
class ValidityError : public Error {
 public:
  using Error::Error;
};

// An inconsistent simulation or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tpp
