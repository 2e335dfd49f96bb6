#include <doctest.h>

#include <random>

#include <hurwitz/annulus.hpp>
#include <hurwitz/errors.hpp>
#include <hurwitz/twist.hpp>

#include "oracles.hpp"

using namespace hurwitz;
using namespace hurwitz::twist;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

// Smallest m with head > tail at 1 + delta, by partial sums and the complex oracle.
std::int64_t oracle_truncation(const std::vector<Real>& f, Real a, Real delta) {
  const Real total = oracle::lseries_direct({1 + delta, 0}, f, a).real();
  for (std::int64_t m = 0;; ++m) {
    const Real head = oracle::partial_real(1 + delta, f, a, 0, m);
    if (head > total - head) return m;
  }
}

// 2 + 2^{1-s} - zeta(s): the sign-flip series of f = 1, alpha = 1, m = 1.
Real flip_m1(Real s) { return 2 + 2 * std::pow(2.0L, -s) - oracle::hurwitz_direct({s, 0}, 1, 200000).real(); }

}  // namespace

TEST_CASE("truncation index") {
  const PeriodicFunction one({1});
  const auto r = truncation_index(one, AlphaParam::rational(1, 1), 1);
  CHECK(r.m == 0);
  CHECK(static_cast<std::int64_t>(r.m) == oracle_truncation({1}, 1, 1));
  CHECK(r.head == doctest::Approx(1.0));
  CHECK(r.tail == doctest::Approx(0.6449340668482264));
  CHECK(truncation_index(one, AlphaParam::rational(1, 1), 10).m == 0);
  const auto small = truncation_index(one, AlphaParam::rational(1, 1), 0.01L);
  CHECK(small.m > 0);
  CHECK(small.head > small.tail);
  for (auto [f, a, d] : {std::tuple<std::vector<Real>, Real, Real>{{3, 1, 2}, 0.7L, 0.5L},
                         {{1, 0.25L}, 2.5L, 0.3L},
                         {{0.2L, 1, 1, 0.5L}, 0.4L, 0.8L}}) {
    const auto t = truncation_index(PeriodicFunction(f), AlphaParam::decimal(std::to_string(static_cast<double>(a))), d);
    CHECK(static_cast<std::int64_t>(t.m) == oracle_truncation(f, a, d));
  }
  const auto neg = truncation_index(PeriodicFunction({-1}), AlphaParam::rational(1, 1), 1);
  CHECK(neg.negated);
  CHECK(neg.m == 0);
  CHECK(code_of([] { truncation_index(PeriodicFunction({1, -1}), AlphaParam::rational(1, 1), 1); }) ==
        ErrorCode::NoSuchIndex);
}

TEST_CASE("sign-change root") {
  const TwistedSeries F(PeriodicFunction({1}), AlphaParam::rational(1, 1), SignFlip{1});
  const auto root = find_sigma0(F, 1, 1e-12L);
  CHECK(root.sigma0 > 1);
  CHECK(root.sigma0 < 2);
  CHECK(root.sigma0 == doctest::Approx(1.4740898895836146).epsilon(1e-12));
  CHECK(std::abs(flip_m1(root.sigma0)) < 1e-9L);
  CHECK(flip_m1(root.sigma0 - 1e-6L) < 0);
  CHECK(flip_m1(root.sigma0 + 1e-6L) > 0);
  CHECK(F.evaluate_real(2) > 0);

  const auto high = find_sigma0(F, 1, 1e-25L, 40);
  CHECK(high.sigma0_text.rfind("1.4740898895836146", 0) == 0);

  const TwistedSeries G(PeriodicFunction({1, -1}), AlphaParam::rational(1, 1), SignFlip{1});
  CHECK(code_of([&] { find_sigma0(G, 1); }) == ErrorCode::SignChangeNotBracketed);
}

TEST_CASE("sign-flip series equals 2 head - L") {
  const PeriodicFunction f({3, 1, 2});
  const auto alpha = AlphaParam::decimal("0.7");
  const TwistedSeries F(f, alpha, SignFlip{4});
  for (Complex s : {Complex(1.3L, 2), Complex(2, -15), Complex(1.05L, 40)}) {
    Complex head = 0;
    for (int n = 0; n <= 4; ++n) head += oracle::periodic_at({3, 1, 2}, n) * std::exp(-s * std::log(n + 0.7L));
    const Complex expected = Real(2) * head - oracle::lseries_direct(s, {3, 1, 2}, 0.7L);
    CHECK(std::abs(F.evaluate(ComplexPoint::from(s)) - expected) < 1e-9L);
  }
  CHECK(F.weight(4) == Complex(1));
  CHECK(F.weight(5) == Complex(-1));
  CHECK(F.flip_index() == 4);
}

TEST_CASE("correction choice") {
  CHECK(choose_correction(0, 5) == Complex(0));
  CHECK(choose_correction(3, 5) == Complex(-3));
  CHECK(std::abs(choose_correction(10, 4) - Complex(-4)) < 1e-15L);
  CHECK(std::abs(Complex(10) + choose_correction(10, 4)) == doctest::Approx(6.0));
  const Complex l{3, 4};
  CHECK(std::abs(choose_correction(l, 2) - Complex(-1.2L, -1.6L)) < 1e-15L);
}

TEST_CASE("greedy step realizes the correction") {
  GreedyState st;
  st.partial_sum = {0.8L, -0.3L};
  const std::vector<Real> a{0.2L, 0.25L, 0.3L, 0.22L, 0.27L, 0.21L};
  const std::vector<Complex> b{{0.01L, 0.02L}, {-0.03L, 0}};
  const auto step = greedy_step(st, a, b, 2.0L);
  CHECK(step.inner_radius == 0);
  CHECK(step.state.S3 == doctest::Approx(1.45));
  CHECK(step.state.lambda == st.partial_sum + b[0] + b[1]);
  CHECK(std::abs(step.next_partial_sum) < 1e-11L);
  REQUIRE(step.phases.size() == a.size());

  const std::vector<Real> gap{1, 0.1L};
  CHECK(code_of([&] { greedy_step(st, gap, b, 1); }) == ErrorCode::AnnulusGap);
}

TEST_CASE("weights with bounded f ratio and scale ratio fill the disk") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> fv(1.0, 1.1), nv(1000, 1999);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Real> w(6);
    for (auto& x : w) x = fv(gen) * std::pow(static_cast<Real>(nv(gen)), -1.3L);
    const Real mx = *std::max_element(w.begin(), w.end());
    const Real mn = *std::min_element(w.begin(), w.end());
    CHECK(mx < 3 * mn);
    CHECK(annulus::radii(w).inner == 0);
  }
}

TEST_CASE("schedule preconditions") {
  const PeriodicFunction one({1});
  const auto alpha = AlphaParam::quadratic(0, 1, 2);
  BlockSchedule s;
  s.N1 = 1000;
  s.blocks = 2;
  s.sigma = 1.5L;
  ScheduleOptions o;
  CHECK(code_of([&] { run_schedule(one, alpha, s, o); }) == ErrorCode::CaseUnreachable);
  const Real sigma = choose_sigma(one, alpha, 1000, 1);
  CHECK(sigma > 1);
  const Real head = oracle::partial_real(sigma, {1}, static_cast<Real>(alpha.value()), 0, 1000);
  const Real total = oracle::lseries_direct({sigma, 0}, {1}, alpha.value(), 2000000).real();
  CHECK(head < 0.01L * (total - head));
  CHECK(code_of([&] { run_schedule(PeriodicFunction({1, -1}), alpha, s, o); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("synthetic schedule is deterministic and contracts") {
  const PeriodicFunction one({1});
  const auto alpha = AlphaParam::quadratic(0, 1, 2);
  BlockSchedule s;
  s.N1 = 1000;
  s.blocks = 4;
  ScheduleOptions o;
  o.mode = SetMode::Synthetic;
  o.seed = 9;
  const auto r1 = run_schedule(one, alpha, s, o);
  const auto r2 = run_schedule(one, alpha, s, o);
  CHECK(r1.completed());
  REQUIRE(r1.blocks.size() == r2.blocks.size());
  for (std::size_t j = 0; j < r1.blocks.size(); ++j) {
    CHECK(r1.blocks[j].next_abs == r2.blocks[j].next_abs);
    CHECK(r1.blocks[j].contraction);
    CHECK(r1.blocks[j].high.eqalg == r1.blocks[j].eqalg);
  }
  CHECK(r1.angles == r2.angles);
}
