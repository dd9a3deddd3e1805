#pragma once

#include <stdexcept>
#include <string>

namespace hrkit {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain,
  NotBesselPair,        // complex indicial roots: oscillation at the origin
  CriticalBoundary,     // y(R) vanishes to working precision
  NoConvergence,
  StepCollapse,
  DivergentIntegral,
  Unsupported,
  NeverPositive,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace hrkit
