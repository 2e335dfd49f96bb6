#include "hurwitz/errors.hpp"

namespace hurwitz {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleAt1: return "PoleAt1";
    case ErrorCode::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NoSuchIndex: return "NoSuchIndex";
    case ErrorCode::SignChangeNotBracketed: return "SignChangeNotBracketed";
    case ErrorCode::AnnulusGap: return "AnnulusGap";
    case ErrorCode::CaseUnreachable: return "CaseUnreachable";
    case ErrorCode::RatioViolated: return "RatioViolated";
    case ErrorCode::InequalityViolated: return "InequalityViolated";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::NotInAnnulus: return "NotInAnnulus";
    case ErrorCode::NotQuadratic: return "NotQuadratic";
    case ErrorCode::NormOverflow: return "NormOverflow";
    case ErrorCode::ZeroOnBoundary: return "ZeroOnBoundary";
    case ErrorCode::QuadratureStalled: return "QuadratureStalled";
    case ErrorCode::LeftHalfPlane: return "LeftHalfPlane";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::FVanishesOnCircle: return "FVanishesOnCircle";
    case ErrorCode::NegativeMargin: return "NegativeMargin";
    case ErrorCode::ResidueZero: return "ResidueZero";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace hurwitz
