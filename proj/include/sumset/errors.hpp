#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sumset {

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation would exceed a dense-representation limit or an
/// enumeration budget. `achieved` carries partial progress where meaningful
/// (e.g. how many separated points could be placed).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what, std::int64_t achieved = -1)
      : std::runtime_error(what), achieved_(achieved) {}

  std::int64_t achieved() const noexcept { return achieved_; }

 private:
  std::int64_t achieved_;
};

/// A construction whose brute-force measurement disagrees with its target.
/// This signals a bug, never an expected outcome.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sumset
