#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace claimdist {

/// Base of every error the library raises. The CLI maps subclasses onto
/// process exit codes (config 1, data 2, invariant 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad usage or configuration: malformed manifest, missing file, oracle limit.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be used: unparsable files, unscoreable documents.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// No token of a document survived vocabulary filtering.
class EmptyDocument : public DataError {
 public:
  using DataError::DataError;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace claimdist
