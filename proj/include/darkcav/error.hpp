#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace darkcav {

enum class ErrorCode {
  NonPositiveCoupling,
  NegativeDamping,
  QuasiMomentumRange,
  WindowTooSmall,
  InvalidArgument,
  StepFailure,
  TruncationWarning,
  NodePoint,
  InconsistentClosure,
  NoDarkState,
  InvalidQuantumNumber,
  StabilityViolation,
  WrongBoundary,
  UnknownFigure,
  EmptyGrid,
  IoFailure,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveCoupling: return "NonPositiveCoupling";
    case ErrorCode::NegativeDamping: return "NegativeDamping";
    case ErrorCode::QuasiMomentumRange: return "QuasiMomentumRange";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::TruncationWarning: return "TruncationWarning";
    case ErrorCode::NodePoint: return "NodePoint";
    case ErrorCode::InconsistentClosure: return "InconsistentClosure";
    case ErrorCode::NoDarkState: return "NoDarkState";
    case ErrorCode::InvalidQuantumNumber: return "InvalidQuantumNumber";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::WrongBoundary: return "WrongBoundary";
    case ErrorCode::UnknownFigure: return "UnknownFigure";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Numerical failures map to CLI exit code 3, everything else to 2.
  bool is_numerical() const noexcept {
    return code_ == ErrorCode::StepFailure || code_ == ErrorCode::TruncationWarning ||
           code_ == ErrorCode::InconsistentClosure || code_ == ErrorCode::StabilityViolation ||
           code_ == ErrorCode::NodePoint;
  }

 private:
  ErrorCode code_;
};

}  // namespace darkcav
