#pragma once

#include <stdexcept>
#include <string>

namespace genericase {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Base class for recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An element was handed to a domain or machine that does not accept it.
class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the width of the integer type in use.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A request exceeded a configured resource cap (message names the cap).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// A configuration file failed to parse or validate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An estimate is undefined (no samples, or too few curve points).
class EstimateError : public Error {
 public:
  using Error::Error;
};

}  // namespace genericase
