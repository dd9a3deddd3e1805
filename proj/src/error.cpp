#include "hrkit/error.hpp"

namespace hrkit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Domain: return "domain_error";
    case ErrorCode::NotBesselPair: return "not_bessel_pair";
    case ErrorCode::CriticalBoundary: return "critical_boundary";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::StepCollapse: return "step_collapse";
    case ErrorCode::DivergentIntegral: return "divergent_integral";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::NeverPositive: return "never_positive";
  }
  return "unknown";
}

}  // namespace hrkit
