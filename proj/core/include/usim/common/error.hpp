#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace usim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Malformed input while reading a line-delimited file.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line_number)
      : Error("line " + std::to_string(line_number) + ": " + message),
        line_number_(line_number) {}

  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_;
};

// A structural invariant does not hold; `path` points at the offending field.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Failure talking to a chat/embedding provider.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& message, bool retryable)
      : Error(message), retryable_(retryable) {}

  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// The provider cannot serve the requested operation at all.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Bad command-line usage; the CLI maps this to exit code 64.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace usim
