#pragma once

#include <stdexcept>
#include <string>

namespace egotime {

/// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter values, malformed files, broken invariants.
/// Validation is total: nothing is clamped or repaired silently.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace egotime
