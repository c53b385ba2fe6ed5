#pragma once

#include <stdexcept>
#include <string>

namespace hillwave {

// Numeric values are part of the C ABI (see hillwave.h); append only.
enum class ErrorCode : int {
  InvalidArgument = 1,
  NonPositiveProfile = 2,
  IntegratorFailure = 3,
  NoInstabilityFound = 4,
  SelectionFailed = 5,
  DegenerateMonodromy = 6,
  NoConvergence = 7,
  DomainExit = 8,
  UnsupportedFamily = 9,
  UnsupportedOrder = 10,
  CflViolation = 11,
  NoResonantEnergy = 12,
  Config = 13,
  Io = 14,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace hillwave
