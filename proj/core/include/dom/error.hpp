#ifndef DOM_ERROR_HPP
#define DOM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dom {

/// Malformed or inconsistent caller input (bad CSV, dimension mismatch,
/// violated precondition).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The selected solve backend could not produce a result: external process
/// failure, unparseable solution file, size limits, unsupported dimension.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solution failed its post-solve checks (binary rounding, weak dominance,
/// objective/recomputed value mismatch).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dom

#endif  // DOM_ERROR_HPP
