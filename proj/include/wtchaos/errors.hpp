#pragma once

#include <stdexcept>
#include <string>

namespace wtchaos {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that do not describe a valid object (mismatched groups, bad config keys).
class SpecificationError : public Error {
 public:
  using Error::Error;
};

/// An operation was asked for outside its domain (empty support, n < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A weight produced a value outside its declared bounds.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Integer overflow or an exact rational exceeding the configured bit cap.
/// Callers in rational mode are expected to retry in log mode.
class NumericRangeError : public Error {
 public:
  using Error::Error;
};

/// Configuration problem tied to a specific key.
class ConfigError : public SpecificationError {
 public:
  ConfigError(std::string key, const std::string& message)
      : SpecificationError(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace wtchaos
