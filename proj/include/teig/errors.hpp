#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teig {

/// Failure categories raised by the library. Every thrown teig::Error carries one.
enum class ErrorCode {
  InvalidProfile,
  NonPositiveProfile,
  OutOfDomain,
  ToleranceNotMet,
  DegenerateExpansion,
  ZeroOnContour,
  QuadratureNotConverged,
  IdenticallyZero,
  MaxDepthExceeded,
  RegimeAEqualsB,
  BracketingFailed,
  InsufficientZeros,
  GammaMissing,
  WrongOriginOrder,
  InsufficientRealZeros,
  PathologicalLattice,
  InterpolationIllConditioned,
  NotConverged,
  RegimeMismatch,
  SchemaError,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::DegenerateExpansion: return "DegenerateExpansion";
    case ErrorCode::ZeroOnContour: return "ZeroOnContour";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::RegimeAEqualsB: return "RegimeAEqualsB";
    case ErrorCode::BracketingFailed: return "BracketingFailed";
    case ErrorCode::InsufficientZeros: return "InsufficientZeros";
    case ErrorCode::GammaMissing: return "GammaMissing";
    case ErrorCode::WrongOriginOrder: return "WrongOriginOrder";
    case ErrorCode::InsufficientRealZeros: return "InsufficientRealZeros";
    case ErrorCode::PathologicalLattice: return "PathologicalLattice";
    case ErrorCode::InterpolationIllConditioned: return "InterpolationIllConditioned";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace teig
