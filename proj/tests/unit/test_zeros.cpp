#include <doctest.h>

#include <cmath>

#include <hurwitz/errors.hpp>
#include <hurwitz/zeros.hpp>

#include "oracles.hpp"

using namespace hurwitz;
using namespace hurwitz::zeros;

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

// 1 + 2^{3/2 - s}: zeros at 3/2 + i (2k + 1) pi / log 2.
Complex dirichlet2(Complex s) { return Complex(1) + std::exp((Complex(1.5L) - s) * std::log(2.0L)); }
const Real kFirstZeroT = kPi / std::log(2.0L);

Evaluator cubic(Complex a, Complex b, Complex c) {
  return [=](Complex s) { return (s - a) * (s - b) * (s - c); };
}

}  // namespace

TEST_CASE("argument counts") {
  CHECK(argument_count(dirichlet2, {1.1L, 2, 0, 10}) == 1);
  CHECK(argument_count(dirichlet2, {1.1L, 2, 0, 15}) == 2);
  CHECK(argument_count(dirichlet2, {1.6L, 2, 0, 15}) == 0);
  CHECK(argument_count(cubic({1.5L, 1}, {1.7L, 2}, {1.9L, 3}), {1.2L, 2.5L, 0, 4}) == 3);
  CHECK(argument_count(cubic({1.5L, 1}, {1.7L, 2}, {3.5L, 3}), {1.2L, 2.5L, 0, 4}) == 2);
  const Evaluator zeta = [](Complex s) { return hurwitz_zeta(ComplexPoint::from(s), 1.0L); };
  CHECK(argument_count(zeta, {1.1L, 2, 0, 30}) == 0);
}

TEST_CASE("counts are refinement invariant and conjugate symmetric") {
  QuadratureParams coarse, fine;
  coarse.initial_points = 32;
  fine.initial_points = 2048;
  fine.max_step = 0.1L;
  const Rectangle r{1.1L, 2, 0, 15};
  const auto a = argument_count_detailed(dirichlet2, r, coarse);
  const auto b = argument_count_detailed(dirichlet2, r, fine);
  CHECK(a.count == b.count);
  CHECK(std::abs(a.winding - a.count) < 0.25L);
  CHECK(argument_count(dirichlet2, {1.1L, 2, -15, 0}) == b.count);
  const auto c = argument_count_detailed(dirichlet2, Circle{{1.5L, kFirstZeroT}, 0.2L});
  CHECK(c.count == 1);
}

TEST_CASE("argument count errors") {
  CHECK(code_of([] { argument_count(dirichlet2, {1, 2, 0, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { argument_count(dirichlet2, {1.5L, 1.2L, 0, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { argument_count(dirichlet2, {1.5L, 2, kFirstZeroT, 5}); }) == ErrorCode::ZeroOnBoundary);
}

TEST_CASE("newton refinement") {
  const auto r = newton_refine(dirichlet2, {1.6L, 4.4L});
  CHECK(std::abs(r.s.value() - Complex(1.5L, kFirstZeroT)) < 1e-10L);
  CHECK(r.residual < 1e-11L);
  CHECK(std::abs(dirichlet2(r.s.value())) == doctest::Approx(static_cast<double>(r.residual)).epsilon(1e-3));
  const Evaluator line = [](Complex s) { return s - Complex(0.5L); };
  CHECK(code_of([&] { newton_refine(line, {2, 0}); }) == ErrorCode::LeftHalfPlane);
  const Evaluator zeta = [](Complex s) { return hurwitz_zeta(ComplexPoint::from(s), 1.0L); };
  CHECK(code_of([&] { newton_refine(zeta, {1.5L, 10}); }) == ErrorCode::NoConvergence);
}

TEST_CASE("rouche certificates") {
  const Complex z0{1.6L, 2};
  const Evaluator F = [=](Complex s) { return s - z0; };
  const Evaluator near = [=](Complex s) { return s - z0 + Complex(0.01L, 0.02L); };
  const Evaluator far = [=](Complex s) { return s - z0 + Complex(0.5L); };
  const Circle circle{z0, 0.2L};
  const auto ok = rouche_certify(F, near, circle, 360, 1, 0, 1e-15L);
  CHECK(ok.valid());
  CHECK(ok.count_f == 1);
  CHECK(ok.count_g == 1);
  CHECK(ok.eps_min <= 0.2L);
  CHECK(ok.eps_min > 0.19L);
  const auto bad = rouche_certify(F, far, circle, 360, 1, 0, 1e-15L);
  CHECK_FALSE(bad.valid());
  CHECK(bad.margin < 0);
  const Circle through{{1.4L, 2}, 0.2L};
  CHECK(code_of([&] { rouche_certify(F, near, through, 360, 1, 0, 1e-15L); }) == ErrorCode::FVanishesOnCircle);
}

TEST_CASE("derivative bound dominates sampled derivatives") {
  const PeriodicFunction f({1, -0.5L, 0.25L});
  const Real a = 0.6L;
  const Real D = derivative_bound(f, a, 1.3L);
  for (Real t : {0.0L, 5.0L, 17.0L}) {
    const Complex s{1.3L, t};
    const Real h = 1e-5L;
    const Complex d = (oracle::lseries_direct(s + h, {1, -0.5L, 0.25L}, a) -
                       oracle::lseries_direct(s - h, {1, -0.5L, 0.25L}, a)) /
                      (2 * h);
    CHECK(std::abs(d) <= D);
  }
}

TEST_CASE("rouche check of L against itself at t = 0") {
  const PeriodicFunction one({1});
  const auto alpha = AlphaParam::decimal("0.7853981634");
  const auto root = twist::find_sigma0(twist::sign_flip_series(one, alpha, 0.5L), 0.5L);
  const Real d1 = (root.sigma0 - 1) / 2;
  const twist::TwistedSeries F(one, alpha, twist::CharacterWeights{});
  const auto cert = rouche_check(one, alpha, F, root.sigma0, d1, 0, 720);
  CHECK(cert.count_f == 0);
  CHECK(cert.count_g == 0);
  CHECK(cert.margin > 0);
  CHECK(cert.valid());
  const auto adversarial = rouche_check(one, alpha, F, root.sigma0, d1, 3, 720);
  CHECK(adversarial.margin < 0);
  CHECK_FALSE(adversarial.valid());
}

TEST_CASE("pipeline outcomes are records or structured failures") {
  const auto zero = find_zero_pipeline(PeriodicFunction({1, -1}), AlphaParam::rational(1, 1), 0.5L);
  REQUIRE(zero.failure);
  CHECK(zero.failure->stage == "residue");
  CHECK(zero.failure->code == ErrorCode::ResidueZero);
  CHECK_FALSE(zero.record);

  PipelineBudget b;
  b.max_t = 2000;
  b.attempts = 1;
  b.kronecker_terms = 3;
  const auto r = find_zero_pipeline(PeriodicFunction({1}), AlphaParam::rational(1, 3), 0.5L, b);
  CHECK(r.record.has_value() != r.failure.has_value());
  if (r.record) {
    REQUIRE(r.record->certificate);
    CHECK(r.record->certificate->valid());
    CHECK(std::abs(oracle::hurwitz_direct(r.record->s.value(), 1.0L / 3)) < 1e-9L);
  } else {
    CHECK_FALSE(r.failure->stage.empty());
  }
  CHECK(r.stages.front().stage == "residue");
}
