#include "hurwitz/twist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hurwitz/annulus.hpp"
#include "hurwitz/ideals.hpp"

namespace hurwitz::twist {

namespace {

/// Absolute tolerance for real-axis evaluation: the series grows like
/// 1/(sigma - 1) near the pole, and the attainable accuracy with it.
Real working_tol(const PeriodicFunction& f, Real sigma) {
  const Real scale = static_cast<Real>(f.period()) * std::max(f.max_abs(), Real(1));
  return 1e-16L * scale * (1 + 1 / std::fabs(sigma - 1));
}

HighReal high_tol(const PeriodicFunction& f, const HighReal& sigma, unsigned digits) {
  const HighReal scale = HighReal(static_cast<long long>(f.period())) * HighReal(std::max(f.max_abs(), Real(1)));
  return pow(HighReal(10), -static_cast<long long>(digits) + 5) * scale * (1 + 1 / abs(sigma - 1));
}

}  // namespace

// ------------------------------------------------------------- TwistedSeries

TwistedSeries::TwistedSeries(PeriodicFunction f, AlphaParam alpha, SignFlip rule)
    : f_(std::move(f)), alpha_(std::move(alpha)), rule_(rule) {
  if (rule.m < 0) fail(ErrorCode::InvalidArgument, "flip index must be nonnegative");
}

TwistedSeries::TwistedSeries(PeriodicFunction f, AlphaParam alpha, CharacterWeights rule)
    : f_(std::move(f)), alpha_(std::move(alpha)), rule_(std::move(rule)) {}

BigIndex TwistedSeries::flip_index() const {
  if (!is_sign_flip()) fail(ErrorCode::InvalidArgument, "series carries character weights");
  return std::get<SignFlip>(rule_).m;
}

Complex TwistedSeries::weight(BigIndex n) const {
  if (const auto* flip = std::get_if<SignFlip>(&rule_)) return n > flip->m ? Real(-1) : Real(1);
  const auto& angles = std::get<CharacterWeights>(rule_).angles;
  if (n >= 0 && n < static_cast<BigIndex>(angles.size())) return std::polar(Real(1), angles[static_cast<std::size_t>(n)]);
  return Real(1);
}

Complex TwistedSeries::evaluate(ComplexPoint s, Real tol) const {
  const Real a = alpha_.value();
  if (const auto* flip = std::get_if<SignFlip>(&rule_)) {
    // sum_{n<=m} - sum_{n>m} = L - 2 * tail_{m+1}.
    return lfunction(s, f_, a, tol / 3) - Real(2) * series_tail(s, f_, a, flip->m + 1, tol / 3);
  }
  const auto& angles = std::get<CharacterWeights>(rule_).angles;
  Complex head = 0;
  const Complex sv = s.value();
  for (std::size_t n = 0; n < angles.size(); ++n) {
    const Real fn = f_(static_cast<BigIndex>(n));
    if (fn != 0) head += fn * std::polar(Real(1), angles[n]) * real_power(static_cast<Real>(n) + a, sv);
  }
  return head + series_tail(s, f_, a, static_cast<BigIndex>(angles.size()), tol / 2);
}

Real TwistedSeries::evaluate_real(Real sigma, Real tol) const {
  const Real a = alpha_.value();
  const BigIndex m = flip_index();
  return lfunction_real(sigma, f_, a, tol / 3) - 2 * series_tail_real(sigma, f_, a, m + 1, tol / 3);
}

HighReal TwistedSeries::evaluate_real(const HighReal& sigma, const HighReal& tol) const {
  const HighReal a = alpha_.value_high();
  const BigIndex m = flip_index();
  return lfunction_real(sigma, f_, a, tol / 3) - 2 * series_tail_real(sigma, f_, a, m + 1, tol / 3);
}

// --------------------------------------------------------- truncation_index

TruncationResult truncation_index(const PeriodicFunction& f, const AlphaParam& alpha, Real delta) {
  if (!(delta > 0) || !std::isfinite(delta)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  const Real r = f.residue();
  if (r == 0) fail(ErrorCode::NoSuchIndex, "residue is zero: the head cannot dominate the tail");
  TruncationResult out{0, 0, 0, 0, r < 0, r < 0 ? f.negated() : f};
  const PeriodicFunction& g = out.f;
  const Real a = alpha.value();
  const Real s = 1 + delta;
  const Real tol = working_tol(g, s);
  const Real total = lfunction_real(s, g, a, tol);
  if (!(total > 0)) fail(ErrorCode::NoSuchIndex, "L(1 + delta) <= 0: no head exceeds its tail");

  auto finish = [&](BigIndex m, Real head) {
    out.m = m;
    out.head = head;
    out.tail = total - head;
    out.tail_bound = g.max_abs() * std::pow(static_cast<Real>(m) + a, -delta) / delta;
    return out;
  };

  // Direct summation first; head(m) > tail(m) iff 2 head(m) > L.
  constexpr BigIndex kDirect = BigIndex{1} << 20;
  Real head = 0;
  Real carry = 0;
  for (BigIndex m = 0; m < kDirect; ++m) {
    const Real term = g(m) * std::pow(static_cast<Real>(m) + a, -s) - carry;
    const Real next = head + term;
    carry = (next - head) - term;
    head = next;
    if (2 * head > total) return finish(m, head);
  }

  // Beyond that, head(m) = L - tail(m + 1) with the tail in closed form.
  auto head_at = [&](BigIndex m) { return total - series_tail_real(s, g, a, m + 1, tol); };
  BigIndex lo = kDirect - 1;
  BigIndex hi = 2 * kDirect;
  while (!(2 * head_at(hi) > total)) {
    lo = hi;
    if (hi > (BigIndex{1} << 120)) fail(ErrorCode::NoSuchIndex, "no truncation index below 2^120");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const BigIndex mid = lo + (hi - lo) / 2;
    if (2 * head_at(mid) > total) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return finish(hi, head_at(hi));
}

TwistedSeries sign_flip_series(const PeriodicFunction& f, const AlphaParam& alpha, Real delta) {
  const TruncationResult t = truncation_index(f, alpha, delta);
  return TwistedSeries(t.f, alpha, SignFlip{t.m});
}

// --------------------------------------------------------------- find_sigma0

namespace {

template <class T, class Eval>
Sigma0Result bisect_sigma0(const Eval& F, T delta, T floor, T tol, T resolution) {
  const T one = T(1);
  if (!(F(one + delta) > 0)) fail(ErrorCode::SignChangeNotBracketed, "F(1 + delta) <= 0");
  T h = delta / 2;
  T hi = one + delta;
  while (!(F(one + h) < 0)) {
    hi = one + h;
    h /= 2;
    if (h < floor) fail(ErrorCode::SignChangeNotBracketed, "no negative value of F above the precision floor");
  }
  T lo = one + h;
  Sigma0Result out;
  for (out.iterations = 0; out.iterations < 400; ++out.iterations) {
    const T mid = (lo + hi) / 2;
    const T value = F(mid);
    using std::abs;
    if (abs(value) <= tol) {
      out.residual = static_cast<Real>(abs(value));
      if constexpr (std::is_same_v<T, Real>) {
        out.sigma0 = mid;
      } else {
        out.sigma0 = mid.template convert_to<Real>();
        out.sigma0_text = mid.str(std::numeric_limits<Real>::digits10 + 10);
      }
      return out;
    }
    if (value < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= resolution * hi) break;
  }
  fail(ErrorCode::PrecisionUnreachable, "bisection stalled above the requested tolerance");
}

}  // namespace

Sigma0Result find_sigma0(const TwistedSeries& F, Real delta, Real tol, unsigned high_digits) {
  if (!F.is_sign_flip()) fail(ErrorCode::InvalidArgument, "find_sigma0 needs a sign-flip series");
  if (!(delta > 0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  if (!(tol > 0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  if (high_digits == 0) {
    auto eval = [&](Real sigma) { return F.evaluate_real(sigma, working_tol(F.f(), sigma)); };
    return bisect_sigma0<Real>(eval, delta, 1e-8L, tol, 4 * kEpsilon);
  }
  ScopedDigits digits(high_digits);
  auto eval = [&](const HighReal& sigma) { return F.evaluate_real(sigma, high_tol(F.f(), sigma, high_digits)); };
  const HighReal resolution = pow(HighReal(10), -static_cast<long long>(high_digits) + 2);
  return bisect_sigma0<HighReal>(eval, HighReal(delta), HighReal("1e-20"), HighReal(tol), resolution);
}

// ---------------------------------------------------------------- greedy step

Complex choose_correction(Complex lambda, Real s3) {
  if (!(s3 >= 0)) fail(ErrorCode::InvalidArgument, "S3 must be nonnegative");
  const Real size = std::abs(lambda);
  if (size == 0) return 0;
  if (size <= s3) return -lambda;
  return -s3 * lambda / size;
}

StepResult greedy_step(const GreedyState& state, std::span<const Real> a_weights, std::span<const Complex> b_terms,
                       Real s4, Real tol) {
  StepResult out;
  out.state = state;
  GreedyState& st = out.state;
  st.S1 = std::abs(state.partial_sum);
  st.S2 = 0;
  st.lambda = state.partial_sum;
  for (const auto& b : b_terms) {
    st.S2 += std::abs(b);
    st.lambda += b;
  }
  st.S3 = 0;
  for (Real w : a_weights) {
    if (!(w > 0)) fail(ErrorCode::InvalidArgument, "A-weights must be positive");
    st.S3 += w;
  }
  st.S4 = s4;
  st.z = choose_correction(st.lambda, st.S3);
  if (a_weights.empty()) {
    out.next_partial_sum = st.lambda;
    return out;
  }
  const annulus::AnnulusSpec spec(a_weights);
  out.inner_radius = spec.inner();
  if (out.inner_radius > 0) fail(ErrorCode::AnnulusGap, "A-weights leave a hole of radius " + std::to_string(static_cast<double>(out.inner_radius)));
  out.phases = annulus::realize(spec, st.z, tol * std::max(Real(1), st.S3));
  out.next_partial_sum = st.lambda + annulus::evaluate(a_weights, out.phases);
  return out;
}

// --------------------------------------------------------------- the schedule

namespace {

Real head_sum(const PeriodicFunction& f, Real a, std::int64_t N, Real sigma) {
  Real sum = 0;
  for (std::int64_t n = 0; n <= N; ++n) sum += f(n) * std::pow(static_cast<Real>(n) + a, -sigma);
  return sum;
}

struct BlockSets {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
};

}  // namespace

Real choose_sigma(const PeriodicFunction& f, const AlphaParam& alpha, std::int64_t N1, Real delta) {
  if (!(delta > 0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  const Real a = alpha.value();
  auto gap = [&](Real sigma) {
    return head_sum(f, a, N1, sigma) - 0.005L * series_tail_real(sigma, f, a, N1 + 1, working_tol(f, sigma));
  };
  Real lo = std::log(1e-8L);
  Real hi = std::log(std::min(delta, Real(1)) * (1 - 1e-9L));
  if (gap(1 + std::exp(hi)) < 0) return 1 + std::exp(hi);
  if (!(gap(1 + std::exp(lo)) < 0)) fail(ErrorCode::CaseUnreachable, "no sigma above 1 + 1e-8 makes the head small against the tail");
  for (int i = 0; i < 200 && hi - lo > 1e-15L; ++i) {
    const Real mid = (lo + hi) / 2;
    if (gap(1 + std::exp(mid)) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 1 + std::exp(lo);
}

InductionReport run_schedule(const PeriodicFunction& f, const AlphaParam& alpha, const BlockSchedule& schedule,
                             const ScheduleOptions& options) {
  if (!f.all_positive()) fail(ErrorCode::InvalidArgument, "the greedy twist needs a positive f");
  if (schedule.N1 < 1 || schedule.blocks < 1) fail(ErrorCode::InvalidArgument, "need N1 >= 1 and at least one block");
  if (schedule.scale.numerator < 0 || schedule.scale.denominator < 1) fail(ErrorCode::InvalidArgument, "bad block scale");
  const Real a = alpha.value();

  InductionReport report;
  if (schedule.sigma) {
    report.sigma = *schedule.sigma;
    if (!(report.sigma > 1 && report.sigma < std::min(1 + options.delta, Real(2))))
      fail(ErrorCode::CaseUnreachable, "fixed sigma lies outside (1, min(1 + delta, 2))");
  } else {
    report.sigma = choose_sigma(f, alpha, schedule.N1, options.delta);
  }
  const Real sigma = report.sigma;
  report.head = head_sum(f, a, schedule.N1, sigma);
  report.tail = series_tail_real(sigma, f, a, schedule.N1 + 1, working_tol(f, sigma));
  report.case_holds = report.head < 0.01L * report.tail;
  if (!report.case_holds) fail(ErrorCode::CaseUnreachable, "head exceeds 10^-2 of the tail at block 1");

  std::vector<std::int64_t> N{schedule.N1};
  for (std::size_t j = 0; j < schedule.blocks; ++j) {
    const auto M = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(static_cast<__int128>(N.back()) * schedule.scale.numerator / schedule.scale.denominator));
    N.push_back(N.back() + M);
  }
  const std::int64_t N_final = N.back();

  std::vector<Real> w(static_cast<std::size_t>(N_final + 1));
  for (std::int64_t n = 0; n <= N_final; ++n) w[n] = f(n) * std::pow(static_cast<Real>(n) + a, -sigma);
  std::vector<Real> theta(static_cast<std::size_t>(N_final + 1), 0);

  std::optional<ideals::ShiftFactorTable> table;
  std::map<ideals::PrimeIdeal, Real> prime_angle;
  if (options.mode == SetMode::Authentic) {
    table.emplace(alpha, options.threads);
    table->extend_to(schedule.N1);
    for (std::int64_t m = 0; m <= schedule.N1; ++m)
      for (const auto& [prime, e] : table->at(m).factors) prime_angle.emplace(prime, 0);
  }
  // Angle of chi on (n + alpha) a from the primes other than `skip`; primes
  // seen for the first time get chi = 1.
  auto known_angle = [&](std::int64_t n, const ideals::PrimeIdeal* skip) {
    Real angle = 0;
    for (const auto& [prime, e] : table->at(n).factors) {
      if (skip && prime == *skip) continue;
      angle += e * prime_angle.emplace(prime, 0).first->second;
    }
    return angle;
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BlockSets> sets;
  Complex partial = 0;
  for (std::int64_t n = 0; n <= schedule.N1; ++n) partial += w[n];

  for (std::size_t j = 0; j < schedule.blocks; ++j) {
    const std::int64_t Nj = N[j];
    const std::int64_t Nn = N[j + 1];
    BlockSets block;
    std::map<std::int64_t, ideals::PrimeIdeal> witness;
    if (table) {
      table->extend_to(Nn);
      for (std::int64_t n = Nj + 1; n <= Nn; ++n) {
        if (auto prime = table->private_prime(n)) {
          block.a.push_back(n);
          witness.emplace(n, *prime);
        } else {
          block.b.push_back(n);
        }
      }
    } else {
      for (std::int64_t n = Nj + 1; n <= Nn; ++n)
        (unit(rng) < options.synthetic_density ? block.a : block.b).push_back(n);
    }

    std::vector<Complex> b_terms;
    for (auto n : block.b) {
      theta[n] = table ? known_angle(n, nullptr) : static_cast<Real>(unit(rng)) * kTwoPi;
      b_terms.push_back(w[n] * std::polar(Real(1), theta[n]));
    }
    std::vector<Real> a_weights;
    for (auto n : block.a) a_weights.push_back(w[n]);
    const Real s4 = series_tail_real(sigma, f, a, Nn + 1, working_tol(f, sigma));

    BlockRecord rec;
    rec.j = j + 1;
    rec.N = Nj;
    rec.M = Nn - Nj;
    rec.N_next = Nn;
    rec.a_count = block.a.size();
    rec.b_count = block.b.size();

    StepResult step;
    try {
      GreedyState state;
      state.j = j + 1;
      state.partial_sum = partial;
      step = greedy_step(state, a_weights, b_terms, s4, options.tol);
    } catch (const Error& e) {
      report.failure = ScheduleFailure{e.code(), j + 1, e.what()};
      break;
    }

    for (std::size_t i = 0; i < block.a.size(); ++i) {
      const std::int64_t n = block.a[i];
      theta[n] = step.phases[i];
      if (table) {
        const auto& prime = witness.at(n);
        int nu = 0;
        for (const auto& [p, e] : table->at(n).factors)
          if (p == prime) nu = e;
        prime_angle[prime] = (step.phases[i] - known_angle(n, &prime)) / nu;
      }
    }

    const GreedyState& st = step.state;
    rec.S1 = st.S1;
    rec.S2 = st.S2;
    rec.S3 = st.S3;
    rec.S4 = st.S4;
    rec.lambda = st.lambda;
    rec.z = st.z;
    rec.next_abs = std::abs(step.next_partial_sum);
    rec.bound = std::max(Real(0), st.S1 + st.S2 - st.S3);
    rec.ratio = st.S2 > 0 ? st.S3 / st.S2 : std::numeric_limits<Real>::infinity();
    rec.inner_radius = step.inner_radius;
    if (!a_weights.empty()) {
      const auto [lo, hi] = std::minmax_element(a_weights.begin(), a_weights.end());
      rec.weight_ratio = *hi / *lo;
    }
    rec.contraction = rec.next_abs <= rec.bound + options.tol * std::max(Real(1), st.S3);
    rec.ratio_ok = 99 * st.S3 > 101 * st.S2;
    rec.separation = 100 * (st.S3 - st.S2) > st.S3 + st.S2;
    rec.induction = st.S1 < 0.01L * (st.S2 + st.S3 + st.S4);
    rec.chain = st.S1 + st.S2 - st.S3 < 0.01L * st.S4;
    rec.eqalg = rec.next_abs < 0.01L * st.S4;
    rec.weights_ok = !a_weights.empty() && rec.weight_ratio < 3;
    report.blocks.push_back(rec);
    sets.push_back(std::move(block));
    partial = step.next_partial_sum;

    if (!rec.contraction || !rec.eqalg) {
      report.failure = ScheduleFailure{ErrorCode::InequalityViolated, j + 1,
                                       rec.eqalg ? "partial sum exceeds the contraction bound"
                                                 : "partial sum is not below 10^-2 of the tail"};
      break;
    }
  }

  // Independent recomputation at high precision from the character values.
  {
    ScopedDigits digits(options.high_digits);
    const HighReal sigma_h(sigma);
    const HighReal alpha_h = alpha.value_high();
    const std::size_t last = report.blocks.empty() ? 0 : static_cast<std::size_t>(report.blocks.back().N_next);
    std::vector<HighReal> re(last + 1);
    std::vector<HighReal> im(last + 1);
    std::vector<HighReal> wh(last + 1);
    std::map<ideals::PrimeIdeal, HighReal> angle_h;
    for (const auto& [prime, angle] : prime_angle) angle_h.emplace(prime, HighReal(angle));
    for (std::size_t n = 0; n <= last && !report.blocks.empty(); ++n) {
      wh[n] = HighReal(f(static_cast<BigIndex>(n))) * pow(HighReal(static_cast<long long>(n)) + alpha_h, -sigma_h);
      HighReal angle = 0;
      if (table) {
        for (const auto& [prime, e] : table->at(static_cast<std::int64_t>(n)).factors) angle += e * angle_h.at(prime);
      } else {
        angle = HighReal(theta[n]);
      }
      re[n] = wh[n] * cos(angle);
      im[n] = wh[n] * sin(angle);
    }
    auto prefix_abs = [&](std::int64_t upto) {
      HighReal x = 0;
      HighReal y = 0;
      for (std::int64_t n = 0; n <= upto; ++n) {
        x += re[n];
        y += im[n];
      }
      return sqrt(x * x + y * y);
    };
    for (std::size_t j = 0; j < report.blocks.size(); ++j) {
      BlockRecord& rec = report.blocks[j];
      HighReal s2 = 0;
      HighReal s3 = 0;
      for (auto n : sets[j].b) s2 += wh[n];
      for (auto n : sets[j].a) s3 += wh[n];
      const HighReal s1 = prefix_abs(rec.N);
      const HighReal next = prefix_abs(rec.N_next);
      const HighReal s4 = series_tail_real(sigma_h, f, alpha_h, rec.N_next + 1, high_tol(f, sigma_h, options.high_digits));
      const HighReal hundredth = HighReal(1) / 100;
      rec.high.S1 = s1.convert_to<Real>();
      rec.high.S2 = s2.convert_to<Real>();
      rec.high.S3 = s3.convert_to<Real>();
      rec.high.S4 = s4.convert_to<Real>();
      rec.high.next_abs = next.convert_to<Real>();
      rec.high.eqalg = next < hundredth * s4;
      rec.high.chain = s1 + s2 - s3 < hundredth * s4;
      rec.high.ratio = 99 * s3 > 101 * s2;
    }
  }
  report.angles = std::move(theta);
  if (!report.blocks.empty()) report.angles.resize(static_cast<std::size_t>(report.blocks.back().N_next + 1));
  return report;
}

}  // namespace hurwitz::twist
