#include "genfun/errors.hpp"

namespace genfun {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CayleySingular: return "CayleySingular";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::MultipleRootSuspected: return "MultipleRootSuspected";
    case ErrorCode::DegeneratePhase: return "DegeneratePhase";
    case ErrorCode::AntipodalPair: return "AntipodalPair";
    case ErrorCode::TangentTooLong: return "TangentTooLong";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace genfun
