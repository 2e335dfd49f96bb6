#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hurwitz/exact.hpp"
#include "hurwitz/precision.hpp"

namespace hurwitz {

/// s = sigma + i t.
struct ComplexPoint {
  Real sigma = 0;
  Real t = 0;

  Complex value() const { return {sigma, t}; }
  static ComplexPoint from(Complex s) { return {s.real(), s.imag()}; }
};

/// The shift alpha > 0 together with its arithmetic nature. Rational and
/// quadratic shifts are kept exact; a decimal literal stands in for a
/// transcendental number and is taken as exact at its stated digits.
class AlphaParam {
 public:
  enum class Kind { Rational, Quadratic, Decimal };

  static AlphaParam rational(const BigInt& numerator, const BigInt& denominator);
  /// a + b*sqrt(d) with d square-free, d > 1 (alpha must be real) and b != 0.
  static AlphaParam quadratic(const Rational& a, const Rational& b, std::int64_t d);
  static AlphaParam decimal(const std::string& literal);

  Kind kind() const { return kind_; }
  Real value() const { return value_; }
  /// The value at the current mpfr default precision.
  HighReal value_high() const;

  /// Rational kind: the value. Quadratic kind: the rational part a.
  const Rational& rational_part() const { return a_; }
  /// Quadratic kind: the coefficient b of sqrt(d).
  const Rational& surd_coefficient() const { return b_; }
  std::int64_t radicand() const { return d_; }
  const std::string& literal() const { return literal_; }

  /// Canonical encoding: "rat:p,q", "quad:a,b,d" or "dec:<literal>".
  std::string encode() const;

 private:
  AlphaParam() = default;

  Kind kind_ = Kind::Decimal;
  Rational a_;
  Rational b_;
  std::int64_t d_ = 0;
  std::string literal_;
  Real value_ = 0;
};

/// A real periodic arithmetic function given by f(1), ..., f(q); f(0) = f(q).
class PeriodicFunction {
 public:
  explicit PeriodicFunction(std::vector<Real> values);

  std::size_t period() const { return values_.size(); }
  std::span<const Real> values() const { return values_; }

  Real operator()(BigIndex n) const;

  /// max f / min f, defined only when every value is positive.
  std::optional<Real> ratio_c() const;
  Real residue() const;
  Real max_abs() const;
  bool all_positive() const;
  PeriodicFunction negated() const;

 private:
  std::vector<Real> values_;
};

inline constexpr Real kDefaultTol = 1e-15L;

/// Euler-Maclaurin order: Bernoulli corrections B_2 ... B_20.
inline constexpr int kBernoulliTerms = 10;

/// zeta(s, alpha) for sigma > 1/2, s != 1, with absolute error <= tol.
Complex hurwitz_zeta(ComplexPoint s, Real alpha, Real tol = kDefaultTol);
Complex hurwitz_zeta(ComplexPoint s, const AlphaParam& alpha, Real tol = kDefaultTol);

/// Rigorous bound on the Euler-Maclaurin remainder after kBernoulliTerms
/// corrections with the direct sum stopped at shift a = M + alpha.
Real euler_maclaurin_remainder(Complex s, Real a);

/// L(s, f, alpha) = sum_{n>=0} f(n) (n+alpha)^{-s}.
Complex lfunction(ComplexPoint s, const PeriodicFunction& f, Real alpha, Real tol = kDefaultTol);
Complex lfunction(ComplexPoint s, const PeriodicFunction& f, const AlphaParam& alpha,
                  Real tol = kDefaultTol);

/// f(q) alpha^{-s} + q^{-s} sum_{b=1}^{q} f(b) zeta(s, (alpha+b)/q).
Complex decompose(ComplexPoint s, const PeriodicFunction& f, Real alpha, Real tol = kDefaultTol);
Complex decompose(ComplexPoint s, const PeriodicFunction& f, const AlphaParam& alpha,
                  Real tol = kDefaultTol);

/// (1/q) sum_{b=1}^{q} f(b); zero means L(s, f, alpha) has no pole at s = 1.
Real residue(const PeriodicFunction& f);

/// sum_{n >= first} f(n) (n+alpha)^{-s}.
Complex series_tail(ComplexPoint s, const PeriodicFunction& f, Real alpha, BigIndex first,
                    Real tol = kDefaultTol);

/// sum_{n = first}^{last} f(n) (n+alpha)^{-s} by direct summation.
Complex partial_sum(ComplexPoint s, const PeriodicFunction& f, Real alpha, std::int64_t first,
                    std::int64_t last);

// Real axis, working and high precision. The high-precision overloads run at
// the current mpfr default precision (see ScopedDigits).
Real hurwitz_zeta_real(Real s, Real alpha, Real tol = kDefaultTol);
HighReal hurwitz_zeta_real(const HighReal& s, const HighReal& alpha, const HighReal& tol);

Real lfunction_real(Real s, const PeriodicFunction& f, Real alpha, Real tol = kDefaultTol);
HighReal lfunction_real(const HighReal& s, const PeriodicFunction& f, const HighReal& alpha,
                        const HighReal& tol);

Real series_tail_real(Real s, const PeriodicFunction& f, Real alpha, BigIndex first,
                      Real tol = kDefaultTol);
HighReal series_tail_real(const HighReal& s, const PeriodicFunction& f, const HighReal& alpha,
                          BigIndex first, const HighReal& tol);

/// Evaluates L on every point; points are independent, so work is spread
/// over `threads` workers (0 = all cores).
std::vector<Complex> evaluate_grid(std::span<const ComplexPoint> points, const PeriodicFunction& f,
                                   const AlphaParam& alpha, Real tol = kDefaultTol,
                                   unsigned threads = 0);

/// (x)^{-s} for real x > 0.
Complex real_power(Real x, Complex s);

}  // namespace hurwitz
