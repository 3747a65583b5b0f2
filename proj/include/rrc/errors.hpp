#pragma once

#include <stdexcept>
#include <string>

namespace rrc {

// Invalid numeric parameter (kernel params, thresholds, config values).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller-supplied data violates a precondition (non-finite action, odd
// episode count for a mixed dataset, init_frac out of range, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file or layout mismatch.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse, e.g. backward() without a recorded forward pass.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rrc
