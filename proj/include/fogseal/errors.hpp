#pragma once

#include <stdexcept>
#include <string>

namespace fogseal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class InvalidCounter : public Error {
 public:
  using Error::Error;
};

class CounterOverflow : public Error {
 public:
  using Error::Error;
};

class PayloadTooLong : public Error {
 public:
  using Error::Error;
};

/// The encryption counter reached 2^40 - 1. The key must be replaced.
class RekeyRequired : public Error {
 public:
  using Error::Error;
};

class UnknownHash : public Error {
 public:
  using Error::Error;
};

class FramingError : public Error {
 public:
  using Error::Error;
};

class DuplicateDevice : public Error {
 public:
  using Error::Error;
};

class UnknownDevice : public Error {
 public:
  using Error::Error;
};

/// Malformed state or vector file. `line()` is 1-based; 0 means end of input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace fogseal
