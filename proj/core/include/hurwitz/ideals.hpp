#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hurwitz/eval.hpp"
#include "hurwitz/exact.hpp"
#include "hurwitz/precision.hpp"

namespace hurwitz::ideals {

/// a + b sqrt(d) with rational a, b. All arithmetic is exact.
struct QuadNumber {
  Rational a;
  Rational b;
  std::int64_t d = 0;

  Rational norm() const { return a * a - b * b * d; }
  Rational trace() const { return 2 * a; }
  bool is_zero() const { return a == 0 && b == 0; }
  /// Sign of the real embedding with sqrt(d) > 0.
  int sign() const;
  Real to_real() const;
  HighReal to_high() const;
  Real log_abs() const;

  QuadNumber conjugate() const { return {a, -b, d}; }
  QuadNumber inverse() const;
  QuadNumber pow(std::int64_t e) const;

  friend QuadNumber operator+(const QuadNumber& x, const QuadNumber& y);
  friend QuadNumber operator-(const QuadNumber& x, const QuadNumber& y);
  friend QuadNumber operator*(const QuadNumber& x, const QuadNumber& y);
  friend QuadNumber operator/(const QuadNumber& x, const QuadNumber& y);
  friend bool operator==(const QuadNumber& x, const QuadNumber& y) = default;
};

std::string to_string(const QuadNumber& x);

enum class Splitting { Split, Inert, Ramified };

/// Prime ideal above p, labelled (p, r) with r the smallest nonnegative root
/// of the minimal polynomial of the integral generator omega modulo p. Inert
/// primes have no root and carry r = -1.
struct PrimeIdeal {
  std::int64_t p = 0;
  std::int64_t r = -1;
  Splitting kind = Splitting::Inert;

  int residue_degree() const { return kind == Splitting::Inert ? 2 : 1; }
  BigInt norm() const;
  std::string label() const;

  friend bool operator==(const PrimeIdeal& x, const PrimeIdeal& y) { return x.p == y.p && x.r == y.r; }
  friend std::strong_ordering operator<=>(const PrimeIdeal& x, const PrimeIdeal& y) {
    if (auto c = x.p <=> y.p; c != 0) return c;
    return x.r <=> y.r;
  }
};

using PrimePower = std::pair<PrimeIdeal, int>;

/// Q(sqrt d), d square-free. O_K = Z[omega] with omega = sqrt(d), or
/// omega = (1 + sqrt d)/2 when d = 1 mod 4.
class QuadraticField {
 public:
  explicit QuadraticField(std::int64_t d);

  std::int64_t d() const { return d_; }
  std::int64_t discriminant() const { return half_omega_ ? d_ : 4 * d_; }
  bool half_omega() const { return half_omega_; }
  std::string integral_basis() const;

  /// Coordinates (x0, x1) with x = x0 + x1 omega.
  std::pair<Rational, Rational> coordinates(const QuadNumber& x) const;
  QuadNumber from_coordinates(const Rational& x0, const Rational& x1) const;
  bool is_integral(const QuadNumber& x) const;

  Splitting splitting(std::int64_t p) const;
  std::vector<PrimeIdeal> primes_above(std::int64_t p) const;

  /// v_P(x) for x != 0.
  int valuation(const PrimeIdeal& prime, const QuadNumber& x) const;
  /// Membership of an integral element in the prime ideal.
  bool contains(const PrimeIdeal& prime, const QuadNumber& x) const;

  /// Prime ideals with the exponents of x O_K (negative for denominators).
  std::vector<PrimePower> factor_element(const QuadNumber& x) const;

 private:
  std::int64_t d_;
  bool half_omega_;
};

QuadraticField field_of(const AlphaParam& alpha);
QuadNumber to_number(const AlphaParam& alpha);

/// Integral ideal in Hermite normal form: Z-basis {a, b + c omega}.
struct IntegralIdeal {
  BigInt a = 1;
  BigInt b = 0;
  BigInt c = 1;
  std::vector<PrimePower> factors;

  BigInt norm() const { return a * c; }
  /// The Z-basis as field elements.
  std::pair<QuadNumber, QuadNumber> generators(const QuadraticField& field) const;
};

/// The minimal integral ideal a with a (n + alpha) O_K integral for all n.
/// Throws NotQuadratic unless alpha is a quadratic irrational.
IntegralIdeal ideal_denominator(const AlphaParam& alpha);

struct IdealFactorization {
  std::int64_t n = 0;
  std::vector<PrimePower> factors;
  BigInt norm;  // |Norm((n + alpha) a)|
};

/// Prime ideal factorization of (n + alpha) a. Norms recombine exactly; a
/// norm too large for trial division raises NormOverflow.
IdealFactorization factor_shift(std::int64_t n, const AlphaParam& alpha, const QuadraticField& field);

/// Factorizations of (m + alpha) a for m = 0..limit with prime-occurrence
/// counts, extended incrementally.
class ShiftFactorTable {
 public:
  explicit ShiftFactorTable(const AlphaParam& alpha, unsigned threads = 1);

  void extend_to(std::int64_t limit);
  std::int64_t limit() const { return static_cast<std::int64_t>(rows_.size()) - 1; }
  const IdealFactorization& at(std::int64_t m) const { return rows_.at(static_cast<std::size_t>(m)); }
  const QuadraticField& field() const { return field_; }
  const IntegralIdeal& denominator() const { return denominator_; }

  /// Number of m <= limit() whose (m + alpha) a the prime divides.
  int occurrences(const PrimeIdeal& prime) const;
  /// Smallest prime of (n + alpha) a dividing no other (m + alpha) a, m <= limit().
  std::optional<PrimeIdeal> private_prime(std::int64_t n) const;

 private:
  AlphaParam alpha_;
  QuadraticField field_;
  IntegralIdeal denominator_;
  unsigned threads_;
  std::vector<IdealFactorization> rows_;
  std::map<PrimeIdeal, int> counts_;
};

struct CasselsBlock {
  std::int64_t N = 0;
  std::int64_t M = 0;
  std::vector<std::int64_t> private_n;
  std::map<std::int64_t, PrimeIdeal> witness;
  Real density = 0;
};

/// Which n in (N, N + M] own a prime of (n + alpha) a dividing no other
/// (m + alpha) a with m <= N + M.
CasselsBlock private_primes(std::int64_t N, std::int64_t M, const AlphaParam& alpha,
                            unsigned threads = 1);
CasselsBlock private_primes(std::int64_t N, std::int64_t M, const ShiftFactorTable& table);

/// A Z-basis s_1..s_l of the multiplicative group generated by positive
/// field elements, with the exponent vectors of every generator.
struct MultiplicativeBasis {
  std::vector<QuadNumber> elements;
  std::vector<Real> logs;                         // log s_j
  std::vector<std::vector<std::int64_t>> exponents;  // u(x) for each input x
  std::int64_t exponent_bound = 0;                // M = max |u_j|
  std::optional<std::size_t> unit_index;          // basis slot carrying the unit part

  std::size_t size() const { return elements.size(); }
};

/// Builds the basis by Hermite reduction of prime-ideal exponent vectors and
/// a real gcd on the unit relations; every representation is checked in
/// exact arithmetic before returning.
MultiplicativeBasis multiplicative_basis(std::span<const QuadNumber> generators);

/// {n + alpha : 0 <= n <= N}.
std::vector<QuadNumber> shifted_set(const AlphaParam& alpha, std::int64_t N);

/// Trial-division factorization of |n| (n != 0); NormOverflow above 10^18.
std::vector<std::pair<std::int64_t, int>> factor_integer(const BigInt& n);

}  // namespace hurwitz::ideals
