#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genfun {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  NonFiniteValue,
  SingularJacobian,
  NoConvergence,
  CayleySingular,
  DegenerateFit,
  MultipleRootSuspected,
  DegeneratePhase,
  AntipodalPair,
  TangentTooLong,
  NotTangent,
  DegenerateConfiguration,
  ConfigInvalid,
};

/// Stable tag used in reports ("failed:<tag>").
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace genfun
