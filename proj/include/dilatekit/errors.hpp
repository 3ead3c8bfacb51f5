#pragma once

#include <stdexcept>
#include <string>

namespace dilatekit {

/// Malformed input: bad config, family mismatch, wrong dimensions. CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal numerical breakdown. CLI exit code 3 unless a subclass says otherwise.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The next four describe inputs that fail a mathematical precondition. The CLI
// records them as failed checks (exit code 1).
class IndefiniteKernel : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class RelationViolation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class CommutationViolation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class AlphaRootFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace dilatekit
