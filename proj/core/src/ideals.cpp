#include "hurwitz/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "hurwitz/errors.hpp"
#include "hurwitz/parallel.hpp"

namespace hurwitz::ideals {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

using i128 = __int128;

int sign_of(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

std::int64_t merged_d(const QuadNumber& x, const QuadNumber& y) {
  if (x.d != 0 && y.d != 0 && x.d != y.d) fail(ErrorCode::InvalidArgument, "mixed quadratic fields");
  return x.d != 0 ? x.d : y.d;
}

int valuation_p(BigInt x, std::int64_t p) {
  int v = 0;
  while (x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

std::int64_t mod_p(const BigInt& x, std::int64_t p) {
  BigInt r = x % p;
  if (r < 0) r += p;
  return r.convert_to<std::int64_t>();
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<i128>(a) * b % m);
}

std::int64_t pow_mod(std::int64_t base, std::int64_t e, std::int64_t m) {
  std::int64_t result = 1 % m;
  base %= m;
  if (base < 0) base += m;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

/// Square root of a quadratic residue n modulo an odd prime p.
std::int64_t sqrt_mod(std::int64_t n, std::int64_t p) {
  n %= p;
  if (n < 0) n += p;
  if (n == 0) return 0;
  std::int64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::int64_t z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::int64_t m = s;
  std::int64_t c = pow_mod(z, q, p);
  std::int64_t t = pow_mod(n, q, p);
  std::int64_t r = pow_mod(n, (q + 1) / 2, p);
  while (t != 1) {
    std::int64_t i = 0;
    std::int64_t t2 = t;
    while (t2 != 1) {
      t2 = mul_mod(t2, t2, p);
      ++i;
    }
    std::int64_t b = c;
    for (std::int64_t j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

/// Integer coordinates of D * x with D the least common denominator.
struct ScaledCoordinates {
  BigInt x0;
  BigInt x1;
  BigInt D;
};

ScaledCoordinates scaled(const QuadraticField& field, const QuadNumber& x) {
  const auto [c0, c1] = field.coordinates(x);
  const BigInt D = boost::multiprecision::lcm(denominator(c0), denominator(c1));
  return {numerator(c0) * (D / denominator(c0)), numerator(c1) * (D / denominator(c1)), D};
}

/// Norm of x0 + x1 omega.
BigInt integral_norm(const QuadraticField& field, const BigInt& x0, const BigInt& x1) {
  if (field.half_omega()) return x0 * x0 + x0 * x1 - BigInt((field.d() - 1) / 4) * x1 * x1;
  return x0 * x0 - BigInt(field.d()) * x1 * x1;
}

int integral_valuation(const QuadraticField& field, const PrimeIdeal& prime, const BigInt& x0,
                       const BigInt& x1) {
  const int k = std::min(x0 == 0 ? 1 << 30 : valuation_p(x0, prime.p),
                         x1 == 0 ? 1 << 30 : valuation_p(x1, prime.p));
  if (prime.kind == Splitting::Inert) return k;
  BigInt pk = boost::multiprecision::pow(BigInt(prime.p), static_cast<unsigned>(k));
  const BigInt y0 = x0 / pk;
  const BigInt y1 = x1 / pk;
  const int vn = valuation_p(integral_norm(field, y0, y1), prime.p);
  if (prime.kind == Splitting::Ramified) return 2 * k + vn;
  const bool inside = mod_p(y0 + y1 * prime.r, prime.p) == 0;
  return k + (inside ? vn : 0);
}

int ramification(const PrimeIdeal& prime) { return prime.kind == Splitting::Ramified ? 2 : 1; }

std::vector<PrimePower> merge(std::vector<PrimePower> powers) {
  std::map<PrimeIdeal, int> acc;
  for (const auto& [prime, e] : powers) acc[prime] += e;
  std::vector<PrimePower> out;
  for (const auto& [prime, e] : acc)
    if (e != 0) out.emplace_back(prime, e);
  return out;
}

BigInt product_norm(const std::vector<PrimePower>& powers) {
  BigInt out = 1;
  for (const auto& [prime, e] : powers)
    out *= boost::multiprecision::pow(prime.norm(), static_cast<unsigned>(e));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- QuadNumber

int QuadNumber::sign() const {
  const int sa = sign_of(a);
  const int sb = sign_of(b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const Rational diff = a * a - b * b * d;
  if (diff == 0) return 0;
  return diff > 0 ? sa : sb;
}

Real QuadNumber::to_real() const {
  const Real root = std::sqrt(static_cast<Real>(d));
  const Real ra = a.convert_to<Real>();
  const Real rb = b.convert_to<Real>();
  if (sign_of(a) * sign_of(b) >= 0) return ra + rb * root;
  // Opposite signs cancel; go through the conjugate instead.
  return norm().convert_to<Real>() / (ra - rb * root);
}

HighReal QuadNumber::to_high() const {
  auto high = [](const Rational& q) {
    return HighReal(numerator(q).str()) / HighReal(denominator(q).str());
  };
  const HighReal root = sqrt(HighReal(d));
  if (sign_of(a) * sign_of(b) >= 0) return high(a) + high(b) * root;
  return high(norm()) / (high(a) - high(b) * root);
}

Real QuadNumber::log_abs() const {
  if (is_zero()) fail(ErrorCode::InvalidArgument, "log of zero");
  const Real root = std::sqrt(static_cast<Real>(d));
  const Real ra = a.convert_to<Real>();
  const Real rb = b.convert_to<Real>();
  if (sign_of(a) * sign_of(b) >= 0) return std::log(std::fabs(ra + rb * root));
  const Rational n = norm();
  const Real log_norm = std::log(std::fabs(numerator(n).convert_to<Real>())) -
                        std::log(denominator(n).convert_to<Real>());
  return log_norm - std::log(std::fabs(ra - rb * root));
}

QuadNumber QuadNumber::inverse() const {
  const Rational n = norm();
  if (n == 0) fail(ErrorCode::InvalidArgument, "inverse of zero");
  return {a / n, -b / n, d};
}

QuadNumber QuadNumber::pow(std::int64_t e) const {
  if (e < 0) return inverse().pow(-e);
  QuadNumber result{1, 0, d};
  QuadNumber base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

QuadNumber operator+(const QuadNumber& x, const QuadNumber& y) {
  return {x.a + y.a, x.b + y.b, merged_d(x, y)};
}

QuadNumber operator-(const QuadNumber& x, const QuadNumber& y) {
  return {x.a - y.a, x.b - y.b, merged_d(x, y)};
}

QuadNumber operator*(const QuadNumber& x, const QuadNumber& y) {
  const std::int64_t d = merged_d(x, y);
  return {x.a * y.a + x.b * y.b * d, x.a * y.b + x.b * y.a, d};
}

QuadNumber operator/(const QuadNumber& x, const QuadNumber& y) { return x * y.inverse(); }

std::string to_string(const QuadNumber& x) {
  std::ostringstream out;
  out << hurwitz::to_string(x.a);
  if (x.b != 0) out << (x.b > 0 ? "+" : "-") << hurwitz::to_string(x.b > 0 ? x.b : Rational(-x.b)) << "*sqrt(" << x.d << ")";
  return out.str();
}

// ---------------------------------------------------------------- PrimeIdeal

BigInt PrimeIdeal::norm() const {
  return kind == Splitting::Inert ? BigInt(p) * p : BigInt(p);
}

std::string PrimeIdeal::label() const {
  if (kind == Splitting::Inert) return "(" + std::to_string(p) + ")";
  return "(" + std::to_string(p) + "," + std::to_string(r) + ")";
}

// ------------------------------------------------------------ QuadraticField

QuadraticField::QuadraticField(std::int64_t d) : d_(d) {
  if (d == 0 || d == 1 || !is_square_free(d)) fail(ErrorCode::NotQuadratic, "radicand must be square-free and not 0 or 1");
  half_omega_ = ((d % 4) + 4) % 4 == 1;
}

std::string QuadraticField::integral_basis() const {
  const std::string root = "sqrt(" + std::to_string(d_) + ")";
  return half_omega_ ? "Z[(1+" + root + ")/2]" : "Z[" + root + "]";
}

std::pair<Rational, Rational> QuadraticField::coordinates(const QuadNumber& x) const {
  if (x.d != 0 && x.d != d_) fail(ErrorCode::InvalidArgument, "element of another field");
  if (half_omega_) return {x.a - x.b, 2 * x.b};
  return {x.a, x.b};
}

QuadNumber QuadraticField::from_coordinates(const Rational& x0, const Rational& x1) const {
  if (half_omega_) return {x0 + x1 / 2, x1 / 2, d_};
  return {x0, x1, d_};
}

bool QuadraticField::is_integral(const QuadNumber& x) const {
  const auto [c0, c1] = coordinates(x);
  return denominator(c0) == 1 && denominator(c1) == 1;
}

Splitting QuadraticField::splitting(std::int64_t p) const {
  if (p == 2) {
    if (!half_omega_) return Splitting::Ramified;
    return ((d_ % 8) + 8) % 8 == 1 ? Splitting::Split : Splitting::Inert;
  }
  const std::int64_t residue = ((d_ % p) + p) % p;
  if (residue == 0) return Splitting::Ramified;
  return pow_mod(residue, (p - 1) / 2, p) == 1 ? Splitting::Split : Splitting::Inert;
}

std::vector<PrimeIdeal> QuadraticField::primes_above(std::int64_t p) const {
  const Splitting kind = splitting(p);
  if (kind == Splitting::Inert) return {PrimeIdeal{p, -1, kind}};
  std::vector<std::int64_t> roots;
  if (p == 2) {
    // Minimal polynomial of omega modulo 2, checked on {0, 1}.
    for (std::int64_t x = 0; x < 2; ++x) {
      const std::int64_t value =
          half_omega_ ? x * x - x - (d_ - 1) / 4 : x * x - d_;
      if (((value % 2) + 2) % 2 == 0) roots.push_back(x);
    }
  } else {
    const std::int64_t s = sqrt_mod(d_, p);
    const std::int64_t inv2 = (p + 1) / 2;
    for (std::int64_t root : {s, (p - s) % p}) {
      roots.push_back(half_omega_ ? mul_mod((1 + root) % p, inv2, p) : root);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  if (kind == Splitting::Ramified) return {PrimeIdeal{p, roots.front(), kind}};
  std::vector<PrimeIdeal> out;
  for (auto r : roots) out.push_back(PrimeIdeal{p, r, kind});
  return out;
}

int QuadraticField::valuation(const PrimeIdeal& prime, const QuadNumber& x) const {
  if (x.is_zero()) fail(ErrorCode::InvalidArgument, "valuation of zero");
  const auto s = scaled(*this, x);
  return integral_valuation(*this, prime, s.x0, s.x1) -
         ramification(prime) * valuation_p(s.D, prime.p);
}

bool QuadraticField::contains(const PrimeIdeal& prime, const QuadNumber& x) const {
  const auto [c0, c1] = coordinates(x);
  if (denominator(c0) != 1 || denominator(c1) != 1)
    fail(ErrorCode::InvalidArgument, "membership test needs an integral element");
  const BigInt x0 = numerator(c0);
  const BigInt x1 = numerator(c1);
  if (prime.kind == Splitting::Inert) return mod_p(x0, prime.p) == 0 && mod_p(x1, prime.p) == 0;
  return mod_p(x0 + x1 * prime.r, prime.p) == 0;
}

std::vector<PrimePower> QuadraticField::factor_element(const QuadNumber& x) const {
  if (x.is_zero()) fail(ErrorCode::InvalidArgument, "factorization of zero");
  const auto s = scaled(*this, x);
  std::set<std::int64_t> primes;
  for (const auto& [p, e] : factor_integer(integral_norm(*this, s.x0, s.x1))) primes.insert(p);
  if (s.D != 1)
    for (const auto& [p, e] : factor_integer(s.D)) primes.insert(p);
  std::vector<PrimePower> out;
  for (auto p : primes) {
    for (const auto& prime : primes_above(p)) {
      const int v = integral_valuation(*this, prime, s.x0, s.x1) -
                    ramification(prime) * valuation_p(s.D, p);
      if (v != 0) out.emplace_back(prime, v);
    }
  }
  return out;
}

QuadraticField field_of(const AlphaParam& alpha) {
  if (alpha.kind() != AlphaParam::Kind::Quadratic) fail(ErrorCode::NotQuadratic, "alpha is not a quadratic irrational");
  return QuadraticField(alpha.radicand());
}

QuadNumber to_number(const AlphaParam& alpha) {
  if (alpha.kind() != AlphaParam::Kind::Quadratic) fail(ErrorCode::NotQuadratic, "alpha is not a quadratic irrational");
  return {alpha.rational_part(), alpha.surd_coefficient(), alpha.radicand()};
}

// ----------------------------------------------------------- ideal denominator

std::pair<QuadNumber, QuadNumber> IntegralIdeal::generators(const QuadraticField& field) const {
  return {field.from_coordinates(Rational(a), 0), field.from_coordinates(Rational(b), Rational(c))};
}

IntegralIdeal ideal_denominator(const AlphaParam& alpha) {
  const QuadraticField field = field_of(alpha);
  const QuadNumber x = to_number(alpha);
  const auto s = scaled(field, x);

  IntegralIdeal ideal;
  if (s.D != 1) {
    for (const auto& [p, e] : factor_integer(s.D)) {
      for (const auto& prime : field.primes_above(p)) {
        const int v = field.valuation(prime, x);
        if (v < 0) ideal.factors.emplace_back(prime, -v);
      }
    }
  }
  const BigInt norm = product_norm(ideal.factors);

  // Lattice {(u, v) : (u + v omega) alpha integral}; its Hermite form must
  // have index equal to the norm read off the valuations.
  if (s.D > BigInt(1'000'000'000)) fail(ErrorCode::NormOverflow, "alpha denominator too large");
  const i128 D = s.D.convert_to<std::int64_t>();
  const i128 y0 = mod_p(s.x0, static_cast<std::int64_t>(D));
  const i128 y1 = mod_p(s.x1, static_cast<std::int64_t>(D));
  const i128 k0 = field.half_omega() ? (field.d() - 1) / 4 : field.d();
  const i128 k1 = field.half_omega() ? 1 : 0;
  auto in_lattice = [&](i128 u, i128 v) {
    const i128 p0 = (u * y0 + v * ((y1 * k0) % D)) % D;
    const i128 p1 = (u * y1 + v * ((y0 + y1 * k1) % D)) % D;
    return p0 == 0 && p1 == 0;
  };
  const std::int64_t g = std::gcd(std::gcd(static_cast<std::int64_t>(y0), static_cast<std::int64_t>(y1)),
                                  static_cast<std::int64_t>(D));
  const i128 a = D / g;
  if (norm % BigInt(static_cast<std::int64_t>(a)) != 0)
    fail(ErrorCode::InvalidArgument, "ideal denominator lattice disagrees with valuations");
  const i128 c = (norm / BigInt(static_cast<std::int64_t>(a))).convert_to<std::int64_t>();
  auto offset_for = [&](i128 v) -> std::optional<i128> {
    for (i128 u = 0; u < a; ++u)
      if (in_lattice(u, v)) return u;
    return std::nullopt;
  };
  for (i128 v = 1; v < c; ++v)
    if (c % v == 0 && offset_for(v)) fail(ErrorCode::InvalidArgument, "ideal denominator lattice disagrees with valuations");
  const auto b = offset_for(c);
  if (!b) fail(ErrorCode::InvalidArgument, "ideal denominator lattice disagrees with valuations");
  ideal.a = static_cast<std::int64_t>(a);
  ideal.b = static_cast<std::int64_t>(*b);
  ideal.c = static_cast<std::int64_t>(c);
  return ideal;
}

// ---------------------------------------------------------------- factorization

std::vector<std::pair<std::int64_t, int>> factor_integer(const BigInt& value) {
  if (value == 0) fail(ErrorCode::InvalidArgument, "factorization of zero");
  BigInt n = boost::multiprecision::abs(value);
  if (n > BigInt(1'000'000'000'000'000'000LL)) fail(ErrorCode::NormOverflow, "norm exceeds the trial-division range");
  auto m = n.convert_to<std::uint64_t>();
  std::vector<std::pair<std::int64_t, int>> out;
  auto strip = [&](std::uint64_t p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(static_cast<std::int64_t>(p), e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p * p <= m; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (m > 1) out.emplace_back(static_cast<std::int64_t>(m), 1);
  return out;
}

IdealFactorization factor_shift(std::int64_t n, const AlphaParam& alpha, const QuadraticField& field) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "shift index must be nonnegative");
  const IntegralIdeal denominator_ideal = ideal_denominator(alpha);
  const QuadNumber x = to_number(alpha) + QuadNumber{Rational(n), 0, field.d()};
  auto powers = field.factor_element(x);
  powers.insert(powers.end(), denominator_ideal.factors.begin(), denominator_ideal.factors.end());
  IdealFactorization out;
  out.n = n;
  out.factors = merge(std::move(powers));
  for (const auto& [prime, e] : out.factors)
    if (e < 0) fail(ErrorCode::InvalidArgument, "shifted ideal is not integral");
  const Rational norm = boost::multiprecision::abs(x.norm()) * Rational(denominator_ideal.norm());
  if (denominator(norm) != 1) fail(ErrorCode::InvalidArgument, "shifted ideal norm is not integral");
  out.norm = numerator(norm);
  if (product_norm(out.factors) != out.norm)
    fail(ErrorCode::InvalidArgument, "prime ideal norms do not recombine");
  return out;
}

// ----------------------------------------------------------- ShiftFactorTable

ShiftFactorTable::ShiftFactorTable(const AlphaParam& alpha, unsigned threads)
    : alpha_(alpha), field_(field_of(alpha)), denominator_(ideal_denominator(alpha)), threads_(threads) {}

void ShiftFactorTable::extend_to(std::int64_t limit) {
  const auto start = static_cast<std::int64_t>(rows_.size());
  if (limit < start) return;
  std::vector<IdealFactorization> fresh(static_cast<std::size_t>(limit - start + 1));
  parallel_for(fresh.size(), threads_, [&](std::size_t i) {
    fresh[i] = factor_shift(start + static_cast<std::int64_t>(i), alpha_, field_);
  });
  for (auto& row : fresh) {
    for (const auto& [prime, e] : row.factors) ++counts_[prime];
    rows_.push_back(std::move(row));
  }
}

int ShiftFactorTable::occurrences(const PrimeIdeal& prime) const {
  const auto it = counts_.find(prime);
  return it == counts_.end() ? 0 : it->second;
}

std::optional<PrimeIdeal> ShiftFactorTable::private_prime(std::int64_t n) const {
  for (const auto& [prime, e] : at(n).factors)
    if (occurrences(prime) == 1) return prime;
  return std::nullopt;
}

CasselsBlock private_primes(std::int64_t N, std::int64_t M, const ShiftFactorTable& table) {
  if (N < 0 || M < 1) fail(ErrorCode::InvalidArgument, "need N >= 0 and M >= 1");
  if (table.limit() != N + M) fail(ErrorCode::InvalidArgument, "factor table must end at N + M");
  CasselsBlock block;
  block.N = N;
  block.M = M;
  for (std::int64_t n = N + 1; n <= N + M; ++n) {
    if (auto prime = table.private_prime(n)) {
      block.private_n.push_back(n);
      block.witness.emplace(n, *prime);
    }
  }
  block.density = static_cast<Real>(block.private_n.size()) / static_cast<Real>(M);
  return block;
}

CasselsBlock private_primes(std::int64_t N, std::int64_t M, const AlphaParam& alpha, unsigned threads) {
  if (N < 0 || M < 1) fail(ErrorCode::InvalidArgument, "need N >= 0 and M >= 1");
  ShiftFactorTable table(alpha, threads);
  table.extend_to(N + M);
  return private_primes(N, M, table);
}

// -------------------------------------------------------- multiplicative basis

std::vector<QuadNumber> shifted_set(const AlphaParam& alpha, std::int64_t N) {
  const QuadNumber x = to_number(alpha);
  std::vector<QuadNumber> out;
  for (std::int64_t n = 0; n <= N; ++n) out.push_back(x + QuadNumber{Rational(n), 0, x.d});
  return out;
}

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

constexpr std::int64_t kEntryLimit = std::int64_t{1} << 40;

void check_entry(std::int64_t v) {
  if (v > kEntryLimit || v < -kEntryLimit) fail(ErrorCode::NormOverflow, "exponent matrix entries grew too large");
}

QuadNumber product_power(std::span<const QuadNumber> gens, std::span<const std::int64_t> exps, std::int64_t d) {
  QuadNumber out{1, 0, d};
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (exps[j] != 0) out = out * gens[j].pow(exps[j]);
  return out;
}

}  // namespace

MultiplicativeBasis multiplicative_basis(std::span<const QuadNumber> gens) {
  if (gens.empty()) fail(ErrorCode::EmptyList, "no generators");
  std::int64_t d = 0;
  for (const auto& g : gens) {
    d = merged_d(QuadNumber{0, 0, d}, g);
    if (g.sign() <= 0) fail(ErrorCode::InvalidArgument, "generators must be positive");
  }
  if (d == 0) fail(ErrorCode::NotQuadratic, "generators carry no radicand");
  const QuadraticField field(d);
  const std::size_t k = gens.size();

  std::map<PrimeIdeal, std::size_t> column;
  std::vector<std::vector<PrimePower>> rows(k);
  for (std::size_t i = 0; i < k; ++i) {
    rows[i] = field.factor_element(gens[i]);
    for (const auto& [prime, e] : rows[i]) column.emplace(prime, 0);
  }
  std::size_t next = 0;
  for (auto& [prime, idx] : column) idx = next++;
  const std::size_t P = column.size();

  Matrix H(k, std::vector<std::int64_t>(P, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (const auto& [prime, e] : rows[i]) H[i][column[prime]] = e;
  Matrix U(k, std::vector<std::int64_t>(k, 0));
  Matrix W(k, std::vector<std::int64_t>(k, 0));  // U^{-1}
  for (std::size_t i = 0; i < k; ++i) U[i][i] = W[i][i] = 1;

  auto swap_rows = [&](std::size_t x, std::size_t y) {
    std::swap(H[x], H[y]);
    std::swap(U[x], U[y]);
    for (auto& row : W) std::swap(row[x], row[y]);
  };
  // row x -= q * row y
  auto reduce_row = [&](std::size_t x, std::size_t y, std::int64_t q) {
    for (std::size_t c = 0; c < P; ++c) check_entry(H[x][c] -= q * H[y][c]);
    for (std::size_t c = 0; c < k; ++c) check_entry(U[x][c] -= q * U[y][c]);
    for (std::size_t r = 0; r < k; ++r) check_entry(W[r][y] += q * W[r][x]);
  };

  std::size_t rank = 0;
  for (std::size_t c = 0; c < P && rank < k; ++c) {
    while (true) {
      std::size_t pivot = k;
      for (std::size_t i = rank; i < k; ++i)
        if (H[i][c] != 0 && (pivot == k || std::llabs(H[i][c]) < std::llabs(H[pivot][c]))) pivot = i;
      if (pivot == k) break;
      swap_rows(rank, pivot);
      bool cleared = true;
      for (std::size_t i = rank + 1; i < k; ++i) {
        if (H[i][c] == 0) continue;
        reduce_row(i, rank, H[i][c] / H[rank][c]);
        if (H[i][c] != 0) cleared = false;
      }
      if (cleared) {
        ++rank;
        break;
      }
    }
  }

  std::vector<Real> logs(k);
  for (std::size_t i = 0; i < k; ++i) logs[i] = gens[i].log_abs();
  auto combined_log = [&](std::span<const std::int64_t> exps) {
    Real s = 0;
    for (std::size_t j = 0; j < k; ++j) s += static_cast<Real>(exps[j]) * logs[j];
    return s;
  };

  // Unit relations: a Euclidean gcd on their logarithms.
  struct Relation {
    Real log;
    std::vector<std::int64_t> exps;
  };
  Real scale = 1;
  for (auto l : logs) scale = std::max(scale, std::fabs(l));
  const Real zero_tol = 1e-12L * scale * static_cast<Real>(k);
  std::vector<Relation> pool;
  for (std::size_t i = rank; i < k; ++i) {
    Relation rel{combined_log(U[i]), U[i]};
    if (std::fabs(rel.log) > zero_tol) pool.push_back(std::move(rel));
  }
  while (pool.size() > 1) {
    std::sort(pool.begin(), pool.end(),
              [](const Relation& x, const Relation& y) { return std::fabs(x.log) > std::fabs(y.log); });
    Relation& big = pool.front();
    const Relation& small = pool.back();
    const auto q = static_cast<std::int64_t>(std::llround(big.log / small.log));
    for (std::size_t j = 0; j < k; ++j) check_entry(big.exps[j] -= q * small.exps[j]);
    big.log = combined_log(big.exps);
    if (std::fabs(big.log) <= zero_tol) pool.erase(pool.begin());
  }

  MultiplicativeBasis basis;
  for (std::size_t i = 0; i < rank; ++i) {
    basis.elements.push_back(product_power(gens, U[i], d));
    basis.logs.push_back(combined_log(U[i]));
  }
  std::optional<Relation> unit;
  if (!pool.empty()) {
    unit = pool.front();
    if (unit->log < 0) {
      unit->log = -unit->log;
      for (auto& e : unit->exps) e = -e;
    }
    basis.unit_index = basis.elements.size();
    basis.elements.push_back(product_power(gens, unit->exps, d));
    basis.logs.push_back(unit->log);
  }

  std::vector<std::int64_t> unit_power(k, 0);
  if (unit)
    for (std::size_t i = rank; i < k; ++i) unit_power[i] = std::llround(combined_log(U[i]) / unit->log);

  basis.exponents.assign(k, {});
  for (std::size_t j = 0; j < k; ++j) {
    auto& u = basis.exponents[j];
    for (std::size_t i = 0; i < rank; ++i) u.push_back(W[j][i]);
    if (unit) {
      std::int64_t e = 0;
      for (std::size_t i = rank; i < k; ++i) check_entry(e += W[j][i] * unit_power[i]);
      u.push_back(e);
    }
    for (auto e : u) basis.exponent_bound = std::max<std::int64_t>(basis.exponent_bound, std::llabs(e));
    if (product_power(basis.elements, u, d) != gens[j])
      fail(ErrorCode::InvalidArgument, "multiplicative basis representation failed exact check");
  }
  return basis;
}

}  // namespace hurwitz::ideals
