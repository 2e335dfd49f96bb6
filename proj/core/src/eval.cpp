#include "hurwitz/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hurwitz/errors.hpp"
#include "hurwitz/parallel.hpp"

namespace hurwitz {

namespace bmp = boost::multiprecision;

// ---------------------------------------------------------------------------
// AlphaParam
// ---------------------------------------------------------------------------

namespace {

Real to_real(const Rational& r) {
  // cpp_rational -> long double through the exact quotient of the parts.
  const BigInt num = bmp::numerator(r);
  const BigInt den = bmp::denominator(r);
  return num.convert_to<Real>() / den.convert_to<Real>();
}

HighReal to_high(const Rational& r) {
  return HighReal(bmp::numerator(r).str()) / HighReal(bmp::denominator(r).str());
}

// Sign of a + b sqrt(d) for d > 0, exactly.
int quadratic_sign(const Rational& a, const Rational& b, std::int64_t d) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const Rational a2 = a * a;
  const Rational b2d = b * b * d;
  if (a2 == b2d) return 0;
  return a2 > b2d ? sa : sb;
}

bool is_decimal_literal(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && s[i] == '+') ++i;
  bool digits = false;
  bool dot = false;
  for (; i < s.size(); ++i) {
    if (s[i] >= '0' && s[i] <= '9') {
      digits = true;
    } else if (s[i] == '.' && !dot) {
      dot = true;
    } else if ((s[i] == 'e' || s[i] == 'E') && digits) {
      ++i;
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
      }
      return true;
    } else {
      return false;
    }
  }
  return digits;
}

}  // namespace

AlphaParam AlphaParam::rational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) fail(ErrorCode::InvalidArgument, "alpha denominator is zero");
  AlphaParam alpha;
  alpha.kind_ = Kind::Rational;
  alpha.a_ = Rational(numerator, denominator);  // reduced, so gcd(p, q) = 1
  if (alpha.a_.sign() <= 0) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  alpha.value_ = to_real(alpha.a_);
  return alpha;
}

AlphaParam AlphaParam::quadratic(const Rational& a, const Rational& b, std::int64_t d) {
  if (b == 0) fail(ErrorCode::NotQuadratic, "quadratic alpha needs b != 0");
  if (d <= 1) fail(ErrorCode::NotQuadratic, "radicand must be > 1 for a real quadratic alpha");
  if (is_perfect_square(d)) fail(ErrorCode::NotQuadratic, "radicand is a perfect square");
  if (!is_square_free(d)) fail(ErrorCode::NotQuadratic, "radicand must be square-free");
  if (quadratic_sign(a, b, d) <= 0) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  AlphaParam alpha;
  alpha.kind_ = Kind::Quadratic;
  alpha.a_ = a;
  alpha.b_ = b;
  alpha.d_ = d;
  alpha.value_ = to_real(a) + to_real(b) * std::sqrt(static_cast<Real>(d));
  return alpha;
}

AlphaParam AlphaParam::decimal(const std::string& literal) {
  if (!is_decimal_literal(literal)) {
    fail(ErrorCode::InvalidArgument, "not a decimal literal: '" + literal + "'");
  }
  AlphaParam alpha;
  alpha.kind_ = Kind::Decimal;
  alpha.literal_ = literal;
  alpha.value_ = std::stold(literal);
  if (!(alpha.value_ > 0) || !std::isfinite(alpha.value_)) {
    fail(ErrorCode::InvalidArgument, "alpha must be positive and finite");
  }
  return alpha;
}

HighReal AlphaParam::value_high() const {
  switch (kind_) {
    case Kind::Rational:
      return to_high(a_);
    case Kind::Quadratic:
      return to_high(a_) + to_high(b_) * bmp::sqrt(HighReal(d_));
    case Kind::Decimal:
      return HighReal(literal_);
  }
  return HighReal(value_);
}

std::string AlphaParam::encode() const {
  switch (kind_) {
    case Kind::Rational:
      return "rat:" + bmp::numerator(a_).str() + "," + bmp::denominator(a_).str();
    case Kind::Quadratic:
      return "quad:" + to_string(a_) + "," + to_string(b_) + "," + std::to_string(d_);
    case Kind::Decimal:
      return "dec:" + literal_;
  }
  return {};
}

// ---------------------------------------------------------------------------
// PeriodicFunction
// ---------------------------------------------------------------------------

PeriodicFunction::PeriodicFunction(std::vector<Real> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorCode::InvalidArgument, "periodic function needs period >= 1");
  for (Real v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "periodic function values must be finite");
  }
}

Real PeriodicFunction::operator()(BigIndex n) const {
  const auto q = static_cast<BigIndex>(values_.size());
  BigIndex r = (n - 1) % q;
  if (r < 0) r += q;
  return values_[static_cast<std::size_t>(r)];
}

std::optional<Real> PeriodicFunction::ratio_c() const {
  if (!all_positive()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return *hi / *lo;
}

Real PeriodicFunction::residue() const {
  return std::accumulate(values_.begin(), values_.end(), Real{0}) /
         static_cast<Real>(values_.size());
}

Real PeriodicFunction::max_abs() const {
  Real m = 0;
  for (Real v : values_) m = std::max(m, std::fabs(v));
  return m;
}

bool PeriodicFunction::all_positive() const {
  return std::all_of(values_.begin(), values_.end(), [](Real v) { return v > 0; });
}

PeriodicFunction PeriodicFunction::negated() const {
  std::vector<Real> v(values_);
  for (Real& x : v) x = -x;
  return PeriodicFunction(std::move(v));
}

Real residue(const PeriodicFunction& f) { return f.residue(); }

// ---------------------------------------------------------------------------
// Euler-Maclaurin
// ---------------------------------------------------------------------------

namespace {

// B_{2k} for k = 1..10 as exact fractions.
constexpr std::array<std::pair<std::int64_t, std::int64_t>, kBernoulliTerms> kBernoulli{{
    {1, 6},
    {-1, 30},
    {1, 42},
    {-1, 30},
    {5, 66},
    {-691, 2730},
    {7, 6},
    {-3617, 510},
    {43867, 798},
    {-174611, 330},
}};

// B_{2k} / (2k)! in the requested type.
template <class T>
std::array<T, kBernoulliTerms> bernoulli_coefficients() {
  std::array<T, kBernoulliTerms> c{};
  T factorial = 1;
  for (int k = 1; k <= kBernoulliTerms; ++k) {
    factorial *= T(2 * k - 1);
    factorial *= T(2 * k);
    c[k - 1] = T(kBernoulli[k - 1].first) / T(kBernoulli[k - 1].second) / factorial;
  }
  return c;
}

const std::array<Real, kBernoulliTerms>& bernoulli_real() {
  static const auto c = bernoulli_coefficients<Real>();
  return c;
}

constexpr std::int64_t kMaxCutoff = 400'000'000;

std::int64_t initial_cutoff(Real abs_t, Real alpha) {
  const Real target = std::max(std::ceil(abs_t), Real{20});
  const Real m = target - std::floor(alpha);
  return m > 0 ? static_cast<std::int64_t>(m) : 0;
}

// Neumaier-compensated accumulator.
template <class T>
struct CompensatedSum {
  T sum{};
  T carry{};
  void add(const T& x) {
    const T t = sum + x;
    carry += (abs_of(sum) >= abs_of(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  T value() const { return sum + carry; }

  static auto abs_of(const T& x) {
    using std::abs;
    return abs(x);
  }
};

struct ComplexCompensated {
  CompensatedSum<Real> re;
  CompensatedSum<Real> im;
  void add(Complex z) {
    re.add(z.real());
    im.add(z.imag());
  }
  Complex value() const { return {re.value(), im.value()}; }
};

void validate_point(ComplexPoint s, Real alpha) {
  if (!std::isfinite(s.sigma) || !std::isfinite(s.t)) {
    fail(ErrorCode::InvalidArgument, "s must be finite");
  }
  if (!(alpha > 0) || !std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  if (std::abs(s.value() - Complex(1, 0)) < 1e-12L) fail(ErrorCode::PoleAt1, "s is at the pole s = 1");
  if (!(s.sigma > 0.5L)) fail(ErrorCode::InvalidArgument, "Euler-Maclaurin evaluation needs sigma > 1/2");
}

}  // namespace

Complex real_power(Real x, Complex s) {
  const Real lx = std::log(x);
  const Real magnitude = std::exp(-s.real() * lx);
  const Real phase = -s.imag() * lx;
  return {magnitude * std::cos(phase), magnitude * std::sin(phase)};
}

Real euler_maclaurin_remainder(Complex s, Real a) {
  const int two_k = 2 * kBernoulliTerms;
  Real poch = 1;
  for (int j = 0; j < two_k; ++j) poch *= std::abs(s + static_cast<Real>(j));
  const Real sigma = s.real();
  const Real denom = sigma + two_k - 1;
  return 4 * poch / std::pow(kTwoPi, static_cast<Real>(two_k)) *
         std::pow(a, -sigma - two_k + 1) / denom;
}

namespace {

struct Estimate {
  Complex value;
  Real error = 0;  // truncation bound plus rounding allowance
};

void unreachable(Real tol, Real floor) {
  std::ostringstream msg;
  msg << "requested tol " << static_cast<double>(tol) << " is below the achievable floor " << static_cast<double>(floor);
  fail(ErrorCode::PrecisionUnreachable, msg.str());
}

// Euler-Maclaurin with the cutoff chosen so the remainder is below tol / 2.
Estimate hurwitz_estimate(ComplexPoint point, Real alpha, Real tol) {
  if (!(tol > 0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  const Complex s = point.value();

  std::int64_t cutoff = initial_cutoff(std::fabs(point.t), alpha);
  Real bound = euler_maclaurin_remainder(s, static_cast<Real>(cutoff) + alpha);
  while (bound > tol / 2) {
    cutoff = std::max<std::int64_t>(2 * cutoff, 16);
    if (cutoff > kMaxCutoff) {
      fail(ErrorCode::PrecisionUnreachable, "Euler-Maclaurin cutoff exceeds limit for requested tol");
    }
    bound = euler_maclaurin_remainder(s, static_cast<Real>(cutoff) + alpha);
  }

  ComplexCompensated head;
  Real magnitude_sum = 0;
  for (std::int64_t n = 0; n < cutoff; ++n) {
    const Complex term = real_power(static_cast<Real>(n) + alpha, s);
    head.add(term);
    magnitude_sum += std::abs(term);
  }

  const Real a = static_cast<Real>(cutoff) + alpha;
  const Complex a_pow = real_power(a, s);  // a^{-s}
  const Complex integral = a * a_pow / (s - Real{1});
  const Complex half = a_pow / Real{2};
  Complex correction = 0;
  Complex poch = s;             // (s)_{2k-1}
  Complex power = a_pow / a;    // a^{-s-2k+1}
  const auto& coeff = bernoulli_real();
  for (int k = 1; k <= kBernoulliTerms; ++k) {
    const Complex term = coeff[k - 1] * poch * power;
    correction += term;
    magnitude_sum += std::abs(term);
    poch *= (s + static_cast<Real>(2 * k - 1)) * (s + static_cast<Real>(2 * k));
    power /= a * a;
  }
  magnitude_sum += std::abs(integral) + std::abs(half);

  Complex result = head.value() + integral + half + correction;
  if (point.t == 0) result.imag(0);
  return {result, 8 * kEpsilon * magnitude_sum + bound};
}

}  // namespace

Complex hurwitz_zeta(ComplexPoint point, Real alpha, Real tol) {
  validate_point(point, alpha);
  const Estimate e = hurwitz_estimate(point, alpha, tol);
  if (tol < e.error) unreachable(tol, e.error);
  return e.value;
}

Complex hurwitz_zeta(ComplexPoint s, const AlphaParam& alpha, Real tol) {
  return hurwitz_zeta(s, alpha.value(), tol);
}

// ---------------------------------------------------------------------------
// Periodic-coefficient series
// ---------------------------------------------------------------------------

namespace {

Real per_term_tol(const PeriodicFunction& f, Real tol) {
  return tol / (2 * static_cast<Real>(f.period()) * f.max_abs());
}

}  // namespace

Complex decompose(ComplexPoint s, const PeriodicFunction& f, Real alpha, Real tol) {
  validate_point(s, alpha);
  if (f.max_abs() == 0) return 0;
  const auto q = static_cast<std::int64_t>(f.period());
  const Real q_real = static_cast<Real>(q);
  const Real tol_b = per_term_tol(f, tol);
  Complex sum = 0;
  Real error = 0;
  for (std::int64_t b = 1; b <= q; ++b) {
    const Real fb = f(b);
    if (fb == 0) continue;
    const Estimate e = hurwitz_estimate(s, (alpha + static_cast<Real>(b)) / q_real, tol_b);
    sum += fb * e.value;
    error += std::abs(fb) * e.error;
  }
  const Complex scale = real_power(q_real, s.value());
  error *= std::abs(scale);
  if (tol < error) unreachable(tol, error);
  // The b = 1..q classes start at n = 1; n = 0 contributes f(0) alpha^{-s}.
  return f(0) * real_power(alpha, s.value()) + scale * sum;
}

Complex decompose(ComplexPoint s, const PeriodicFunction& f, const AlphaParam& alpha, Real tol) {
  return decompose(s, f, alpha.value(), tol);
}

Complex partial_sum(ComplexPoint s, const PeriodicFunction& f, Real alpha, std::int64_t first,
                    std::int64_t last) {
  ComplexCompensated acc;
  const Complex sv = s.value();
  for (std::int64_t n = first; n <= last; ++n) {
    const Real fn = f(n);
    if (fn != 0) acc.add(fn * real_power(static_cast<Real>(n) + alpha, sv));
  }
  return acc.value();
}

Complex series_tail(ComplexPoint s, const PeriodicFunction& f, Real alpha, BigIndex first,
                    Real tol) {
  validate_point(s, alpha);
  if (first < 0) fail(ErrorCode::InvalidArgument, "tail must start at n >= 0");
  if (f.max_abs() == 0) return 0;
  const auto q = static_cast<BigIndex>(f.period());
  const Real q_real = static_cast<Real>(q);
  const Real tol_b = per_term_tol(f, tol);
  Complex sum = 0;
  Real error = 0;
  for (BigIndex b = 0; b < q; ++b) {
    const Real fb = f(first + b);
    if (fb == 0) continue;
    const Real shift = (static_cast<Real>(first + b) + alpha) / q_real;
    const Estimate e = hurwitz_estimate(s, shift, tol_b);
    sum += fb * e.value;
    error += std::abs(fb) * e.error;
  }
  const Complex scale = real_power(q_real, s.value());
  error *= std::abs(scale);
  if (tol < error) unreachable(tol, error);
  return scale * sum;
}

Complex lfunction(ComplexPoint s, const PeriodicFunction& f, Real alpha, Real tol) {
  validate_point(s, alpha);
  const auto q = static_cast<std::int64_t>(f.period());
  // Direct head over whole periods, then one shifted Hurwitz tail per class.
  const std::int64_t head_terms = q * ((64 + q - 1) / q);
  return partial_sum(s, f, alpha, 0, head_terms - 1) + series_tail(s, f, alpha, head_terms, tol);
}

Complex lfunction(ComplexPoint s, const PeriodicFunction& f, const AlphaParam& alpha, Real tol) {
  return lfunction(s, f, alpha.value(), tol);
}

std::vector<Complex> evaluate_grid(std::span<const ComplexPoint> points, const PeriodicFunction& f,
                                   const AlphaParam& alpha, Real tol, unsigned threads) {
  std::vector<Complex> out(points.size());
  parallel_for(points.size(), threads,
               [&](std::size_t i) { out[i] = lfunction(points[i], f, alpha, tol); });
  return out;
}

// ---------------------------------------------------------------------------
// Real axis (templated over working / high precision)
// ---------------------------------------------------------------------------

namespace {

template <class T>
T real_remainder_bound(const T& s, const T& a) {
  using std::pow;
  const int two_k = 2 * kBernoulliTerms;
  T poch = 1;
  for (int j = 0; j < two_k; ++j) poch *= (s + j);
  const T two_pi = 2 * boost::math::constants::pi<T>();
  return 4 * poch / pow(two_pi, two_k) * pow(a, -s - two_k + 1) / (s + two_k - 1);
}

template <class T>
struct RealEstimate {
  T value;
  T error;
};

template <class T>
RealEstimate<T> hurwitz_real_estimate(const T& s, const T& alpha, const T& tol) {
  using std::abs;
  using std::ceil;
  using std::floor;
  using std::pow;
  if (!(alpha > 0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  if (abs(s - 1) < T(1e-12L)) fail(ErrorCode::PoleAt1, "s is at the pole s = 1");
  if (!(s > T(0.5L))) fail(ErrorCode::InvalidArgument, "Euler-Maclaurin evaluation needs s > 1/2");
  if (!(tol > 0)) fail(ErrorCode::InvalidArgument, "tol must be positive");

  std::int64_t cutoff = 0;
  {
    const T m = T(20) - floor(alpha);
    if (m > 0) cutoff = static_cast<std::int64_t>(m);
  }
  T bound = real_remainder_bound<T>(s, T(cutoff) + alpha);
  while (bound > tol / 2) {
    cutoff = std::max<std::int64_t>(2 * cutoff, 16);
    if (cutoff > kMaxCutoff) {
      fail(ErrorCode::PrecisionUnreachable, "Euler-Maclaurin cutoff exceeds limit for requested tol");
    }
    bound = real_remainder_bound<T>(s, T(cutoff) + alpha);
  }

  CompensatedSum<T> head;
  T magnitude_sum = 0;
  for (std::int64_t n = 0; n < cutoff; ++n) {
    const T term = pow(T(n) + alpha, -s);
    head.add(term);
    magnitude_sum += term;
  }
  const T a = T(cutoff) + alpha;
  const T a_pow = pow(a, -s);
  const T integral = a * a_pow / (s - 1);
  const T half = a_pow / 2;
  const auto coeff = bernoulli_coefficients<T>();
  T correction = 0;
  T poch = s;
  T power = a_pow / a;
  for (int k = 1; k <= kBernoulliTerms; ++k) {
    const T term = coeff[k - 1] * poch * power;
    correction += term;
    magnitude_sum += abs(term);
    poch *= (s + (2 * k - 1)) * (s + 2 * k);
    power /= a * a;
  }
  magnitude_sum += abs(integral) + half;
  return {head.value() + integral + half + correction,
          8 * std::numeric_limits<T>::epsilon() * magnitude_sum + bound};
}

template <class T>
T hurwitz_real_impl(const T& s, const T& alpha, const T& tol) {
  const auto e = hurwitz_real_estimate<T>(s, alpha, tol);
  if (tol < e.error) fail(ErrorCode::PrecisionUnreachable, "requested tol is below the achievable floor");
  return e.value;
}

template <class T>
T series_tail_real_impl(const T& s, const PeriodicFunction& f, const T& alpha, BigIndex first,
                        const T& tol) {
  using std::pow;
  if (first < 0) fail(ErrorCode::InvalidArgument, "tail must start at n >= 0");
  if (f.max_abs() == 0) return T(0);
  const auto q = static_cast<BigIndex>(f.period());
  const T q_t = T(static_cast<long long>(q));
  const T tol_b = tol / (2 * q_t * T(f.max_abs()));
  T sum = 0;
  T error = 0;
  for (BigIndex b = 0; b < q; ++b) {
    const Real fb = f(first + b);
    if (fb == 0) continue;
    T start;
    if constexpr (std::is_same_v<T, Real>) {
      start = static_cast<Real>(first + b);
    } else {
      start = T(to_string(first + b));
    }
    const auto e = hurwitz_real_estimate<T>(s, (start + alpha) / q_t, tol_b);
    sum += T(fb) * e.value;
    error += T(std::fabs(fb)) * e.error;
  }
  const T scale = pow(q_t, -s);
  if (tol < error * scale) fail(ErrorCode::PrecisionUnreachable, "requested tol is below the achievable floor");
  return scale * sum;
}

template <class T>
T lfunction_real_impl(const T& s, const PeriodicFunction& f, const T& alpha, const T& tol) {
  using std::pow;
  const auto q = static_cast<std::int64_t>(f.period());
  const std::int64_t head_terms = q * ((64 + q - 1) / q);
  CompensatedSum<T> head;
  for (std::int64_t n = 0; n < head_terms; ++n) {
    const Real fn = f(n);
    if (fn != 0) head.add(T(fn) * pow(T(n) + alpha, -s));
  }
  return head.value() + series_tail_real_impl<T>(s, f, alpha, head_terms, tol);
}

}  // namespace

Real hurwitz_zeta_real(Real s, Real alpha, Real tol) { return hurwitz_real_impl<Real>(s, alpha, tol); }

HighReal hurwitz_zeta_real(const HighReal& s, const HighReal& alpha, const HighReal& tol) {
  return hurwitz_real_impl<HighReal>(s, alpha, tol);
}

Real lfunction_real(Real s, const PeriodicFunction& f, Real alpha, Real tol) {
  return lfunction_real_impl<Real>(s, f, alpha, tol);
}

HighReal lfunction_real(const HighReal& s, const PeriodicFunction& f, const HighReal& alpha,
                        const HighReal& tol) {
  return lfunction_real_impl<HighReal>(s, f, alpha, tol);
}

Real series_tail_real(Real s, const PeriodicFunction& f, Real alpha, BigIndex first, Real tol) {
  return series_tail_real_impl<Real>(s, f, alpha, first, tol);
}

HighReal series_tail_real(const HighReal& s, const PeriodicFunction& f, const HighReal& alpha,
                          BigIndex first, const HighReal& tol) {
  return series_tail_real_impl<HighReal>(s, f, alpha, first, tol);
}

}  // namespace hurwitz
