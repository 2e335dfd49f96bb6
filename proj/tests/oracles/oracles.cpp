#include "oracles.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace oracle {
namespace {

struct Neumaier {
  Complex sum{0, 0};
  Complex c{0, 0};
  void add(Complex x) {
    auto part = [](Real& s, Real& comp, Real v) {
      const Real t = s + v;
      if (std::abs(s) >= std::abs(v)) comp += (s - t) + v;
      else comp += (v - t) + s;
      s = t;
    };
    Real sr = sum.real(), si = sum.imag(), cr = c.real(), ci = c.imag();
    part(sr, cr, x.real());
    part(si, ci, x.imag());
    sum = {sr, si};
    c = {cr, ci};
  }
  Complex value() const { return sum + c; }
};

Complex power(Real x, Complex s) { return std::exp(-s * std::log(x)); }

// sum_{k>=0} (k + b)^{-s} for large b.
Complex tail_at(Complex s, Real b) {
  const Complex head = power(b, s);
  return power(b, s - Complex(1)) / (s - Complex(1)) + head / Real(2) + s * power(b, s + Complex(1)) / Real(12) -
         s * (s + Complex(1)) * (s + Complex(2)) * power(b, s + Complex(3)) / Real(720);
}

}  // namespace

Real periodic_at(const std::vector<Real>& f, std::int64_t n) {
  const auto q = static_cast<std::int64_t>(f.size());
  return f[static_cast<std::size_t>(((n - 1) % q + q) % q)];
}

Complex hurwitz_direct(Complex s, Real a, std::int64_t terms) {
  Neumaier acc;
  for (std::int64_t n = terms - 1; n >= 0; --n) acc.add(power(static_cast<Real>(n) + a, s));
  acc.add(tail_at(s, static_cast<Real>(terms) + a));
  return acc.value();
}

Complex lseries_direct(Complex s, const std::vector<Real>& f, Real a, std::int64_t periods) {
  const auto q = static_cast<std::int64_t>(f.size());
  Neumaier acc;
  const std::int64_t terms = periods * q;
  for (std::int64_t n = terms - 1; n >= 0; --n) {
    const Real fn = periodic_at(f, n);
    if (fn != 0) acc.add(fn * power(static_cast<Real>(n) + a, s));
  }
  // n = terms + j + q k, j = 0..q-1: q^{-s} sum_k (k + (terms + j + a)/q)^{-s}.
  const Complex scale = power(static_cast<Real>(q), s);
  for (std::int64_t j = 0; j < q; ++j) {
    const Real fn = periodic_at(f, terms + j);
    if (fn != 0) acc.add(fn * scale * tail_at(s, (static_cast<Real>(terms + j) + a) / static_cast<Real>(q)));
  }
  return acc.value();
}

Real partial_real(Real s, const std::vector<Real>& f, Real a, std::int64_t first, std::int64_t last) {
  Neumaier acc;
  for (std::int64_t n = last; n >= first; --n) acc.add(periodic_at(f, n) * std::pow(static_cast<Real>(n) + a, -s));
  return acc.value().real();
}

Real circle_distance(Real x) { return std::abs(x - std::nearbyint(x)); }

std::pair<Real, Real> annulus_monte_carlo(const std::vector<Real>& r, std::int64_t k, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    Complex z{0, 0};
    for (Real ri : r) z += std::polar(ri, static_cast<Real>(phase(gen)));
    lo = std::min(lo, std::abs(z));
    hi = std::max(hi, std::abs(z));
  }
  return {lo, hi};
}

bool in_prime(const DegreeOnePrime& P, const BigInt& x0, const BigInt& x1) {
  BigInt v = (x0 + x1 * P.r) % P.p;
  return v == 0;
}

std::vector<std::pair<std::int64_t, int>> factor_small(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (n < 0) n = -n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::pair<DegreeOnePrime, int>> factor_shift_sqrt(std::int64_t n, std::int64_t d) {
  std::vector<std::pair<DegreeOnePrime, int>> out;
  for (const auto& [p, e] : factor_small(n * n - d)) out.push_back({{p, ((-n) % p + p) % p}, e});
  return out;
}

std::vector<std::int64_t> private_by_pairs(std::int64_t N, std::int64_t M, std::int64_t d) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = N + 1; n <= N + M; ++n) {
    bool found = false;
    for (const auto& [P, e] : factor_shift_sqrt(n, d)) {
      bool alone = true;
      for (std::int64_t m = 0; m <= N + M && alone; ++m) {
        if (m != n && in_prime(P, BigInt(m), BigInt(1))) alone = false;
      }
      if (alone) {
        found = true;
        break;
      }
    }
    if (found) out.push_back(n);
  }
  return out;
}

}  // namespace oracle
