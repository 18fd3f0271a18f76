#pragma once

#include <stdexcept>
#include <string>

namespace romsched {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: negative or non-finite sizes, out-of-range ranks,
/// violated preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A sequence whose processing times are all zero has no defined R(J).
class DegenerateSequence : public Error {
 public:
  using Error::Error;
};

/// The machine count admits no structurally valid ALG configuration.
class ConfigInvalid : public Error {
 public:
  ConfigInvalid(const std::string& what, int minimal_valid_m)
      : Error(what), minimal_valid_m_(minimal_valid_m) {}

  /// Smallest m for which the same h rule yields a valid configuration
  /// (0 if none exists in the searched range).
  int minimal_valid_m() const noexcept { return minimal_valid_m_; }

 private:
  int minimal_valid_m_;
};

/// A search or enumeration exceeded its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// random_proper could not produce a proper sequence in its retry budget.
class NotProperAfterRetries : public Error {
 public:
  using Error::Error;
};

/// A quantity that is only defined over proper sequences was requested for
/// a plain one.
class NotProper : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace romsched
