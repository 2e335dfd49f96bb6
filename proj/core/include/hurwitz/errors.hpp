#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hurwitz {

/// Failure classes raised by the library. Every failure a caller can act on
/// has its own code so that reports and the CLI can branch on it.
enum class ErrorCode {
  InvalidArgument,
  PoleAt1,
  PrecisionUnreachable,
  BudgetExhausted,
  DegenerateInput,
  NoSuchIndex,
  SignChangeNotBracketed,
  AnnulusGap,
  CaseUnreachable,
  RatioViolated,
  InequalityViolated,
  EmptyList,
  NotInAnnulus,
  NotQuadratic,
  NormOverflow,
  ZeroOnBoundary,
  QuadratureStalled,
  LeftHalfPlane,
  NoConvergence,
  FVanishesOnCircle,
  NegativeMargin,
  ResidueZero,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace hurwitz
