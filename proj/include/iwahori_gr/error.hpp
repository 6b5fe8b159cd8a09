#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwahori_gr {

enum class ErrorCode {
  NonPrime,
  BadDegree,
  NotAUnit,
  UnsupportedType,
  BadIndex,
  HighestRoot,
  OppositeRoots,
  CertificationFailure,
  IdentityElement,
  PrecisionExceeded,
  NotFactorizable,
  AxiomViolation,
  MixedReduction,
  ReducedInput,
  Mismatch,
  GenerationFailure,
  QuotientMismatch,
  GroupTooLarge,
  PropertyViolation,
  MembershipFailure,
  InadmissiblePrime,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrime: return "NonPrime";
    case ErrorCode::BadDegree: return "BadDegree";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::UnsupportedType: return "UnsupportedType";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::HighestRoot: return "HighestRoot";
    case ErrorCode::OppositeRoots: return "OppositeRoots";
    case ErrorCode::CertificationFailure: return "CertificationFailure";
    case ErrorCode::IdentityElement: return "IdentityElement";
    case ErrorCode::PrecisionExceeded: return "PrecisionExceeded";
    case ErrorCode::NotFactorizable: return "NotFactorizable";
    case ErrorCode::AxiomViolation: return "AxiomViolation";
    case ErrorCode::MixedReduction: return "MixedReduction";
    case ErrorCode::ReducedInput: return "ReducedInput";
    case ErrorCode::Mismatch: return "Mismatch";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::QuotientMismatch: return "QuotientMismatch";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::PropertyViolation: return "PropertyViolation";
    case ErrorCode::MembershipFailure: return "MembershipFailure";
    case ErrorCode::InadmissiblePrime: return "InadmissiblePrime";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iwahori_gr
