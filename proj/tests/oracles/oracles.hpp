#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// Reference computations that share no code with the library.
namespace oracle {

using Real = long double;
using Complex = std::complex<long double>;
using BigInt = boost::multiprecision::cpp_int;

/// f(n) for values f(1..q), f(0) = f(q).
Real periodic_at(const std::vector<Real>& f, std::int64_t n);

/// sum_{n>=0} (n+a)^{-s}: direct summation of n < terms, closed with the
/// integral, the half term and two Bernoulli corrections.
Complex hurwitz_direct(Complex s, Real a, std::int64_t terms = 100000);

/// sum_{n>=0} f(n) (n+a)^{-s}: direct summation over whole periods and a
/// per-residue-class tail as in hurwitz_direct.
Complex lseries_direct(Complex s, const std::vector<Real>& f, Real a, std::int64_t periods = 20000);

/// sum_{n=first}^{last} f(n) (n+a)^{-s} in plain compensated summation.
Real partial_real(Real s, const std::vector<Real>& f, Real a, std::int64_t first, std::int64_t last);

/// Distance from x to the nearest integer.
Real circle_distance(Real x);

/// Min and max of |sum r_i e^{i theta_i}| over k uniform phase draws.
std::pair<Real, Real> annulus_monte_carlo(const std::vector<Real>& r, std::int64_t k, std::uint64_t seed);

/// A prime ideal of Z[sqrt d] (d = 2, 3 mod 4) of degree one: (p, sqrt d - r).
struct DegreeOnePrime {
  std::int64_t p;
  std::int64_t r;
  friend bool operator==(const DegreeOnePrime&, const DegreeOnePrime&) = default;
  friend auto operator<=>(const DegreeOnePrime&, const DegreeOnePrime&) = default;
};

/// x0 + x1 sqrt d lies in (p, sqrt d - r) iff p | x0 + x1 r.
bool in_prime(const DegreeOnePrime& P, const BigInt& x0, const BigInt& x1);

/// Prime ideals with exponents of (n + sqrt d) Z[sqrt d], from trial division
/// of n^2 - d: content one means only (p, -n mod p) can divide it.
std::vector<std::pair<DegreeOnePrime, int>> factor_shift_sqrt(std::int64_t n, std::int64_t d);

/// n in (N, N+M] having a prime of (n + sqrt d) that divides no other
/// (m + sqrt d), 0 <= m <= N + M, checked pair by pair.
std::vector<std::int64_t> private_by_pairs(std::int64_t N, std::int64_t M, std::int64_t d);

/// Rational prime factorization by trial division.
std::vector<std::pair<std::int64_t, int>> factor_small(std::int64_t n);

}  // namespace oracle
