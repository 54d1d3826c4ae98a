#pragma once

#include <stdexcept>

namespace hycon {

// Precondition violations (bad sizes, out-of-range indices, invalid
// parameters) are reported with std::invalid_argument. The types below cover
// runtime failures a caller may want to tell apart.

/// The communication structure splits into more than one component.
class DisconnectedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A local x-update failed to reach the requested residual.
class ResolventError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine did not reach its stopping criterion.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hycon
