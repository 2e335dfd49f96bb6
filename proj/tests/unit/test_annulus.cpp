#include <doctest.h>

#include <random>

#include <hurwitz/annulus.hpp>
#include <hurwitz/errors.hpp>

#include "oracles.hpp"

using namespace hurwitz;
using namespace hurwitz::annulus;

namespace {
std::vector<Real> R(std::initializer_list<Real> r) { return r; }
}  // namespace

TEST_CASE("radii examples") {
  auto a = radii(R({1, 2, 5}));
  CHECK(a.outer == 8);
  CHECK(a.inner == 2);
  auto b = radii(R({1}));
  CHECK(b.outer == 1);
  CHECK(b.inner == 1);
  auto c = radii(R({1, 1, 1}));
  CHECK(c.outer == 3);
  CHECK(c.inner == 0);
  CHECK_THROWS_AS(radii(std::vector<Real>{}), Error);
  CHECK_THROWS_AS(radii(R({1, -2})), Error);
}

TEST_CASE("prefix sums follow the sorted radii") {
  const AnnulusSpec spec(R({5, 1, 2}));
  const std::vector<Real> expected{0, 1, 3, 8};
  CHECK(std::vector<Real>(spec.prefix_sums().begin(), spec.prefix_sums().end()) == expected);
  CHECK(spec.radii()[0] == 5);
}

TEST_CASE("contains examples") {
  const AnnulusSpec spec(R({1, 2, 5}));
  CHECK(contains(spec, 2));
  CHECK_FALSE(contains(spec, 0));
  CHECK(contains(spec, 8));
  CHECK_FALSE(contains(spec, Complex(8.1L, 0)));
}

TEST_CASE("realize examples") {
  const AnnulusSpec spec(R({1, 2, 5}));
  const auto ph = realize(spec, 8);
  for (Real p : ph) CHECK(std::abs(std::polar(Real(1), p) - Complex(1)) < 1e-12L);
  const auto ph2 = realize(spec, Complex(0, 2));
  CHECK(std::abs(evaluate(R({1, 2, 5}), ph2) - Complex(0, 2)) <= 1e-9L);
  const AnnulusSpec ones(R({1, 1, 1}));
  CHECK(std::abs(evaluate(R({1, 1, 1}), realize(ones, 0))) <= 1e-12L);
  CHECK_THROWS_AS(realize(spec, 1), Error);
  for (Real p : ph2) {
    CHECK(p >= 0);
    CHECK(p < 2 * kPi);
  }
}

TEST_CASE("rotation leaves the realization error unchanged") {
  const std::vector<Real> r{0.3L, 1.1L, 0.9L, 0.5L};
  const AnnulusSpec spec(r);
  const Complex z{0.7L, -1.2L};
  const Real theta = 1.234L;
  const Real e1 = std::abs(evaluate(r, realize(spec, z)) - z);
  const Complex zr = z * std::polar(Real(1), theta);
  const Real e2 = std::abs(evaluate(r, realize(spec, zr)) - zr);
  CHECK(e1 < 1e-12L);
  CHECK(e2 < 1e-12L);
}

TEST_CASE("sample oracle examples agree with the independent Monte Carlo") {
  auto one = sample_oracle(R({1}), 1000, 3);
  CHECK(one.min_modulus == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.max_modulus == doctest::Approx(1.0).epsilon(1e-15));
  auto s = sample_oracle(R({1, 2, 5}), 100000, 4, 4);
  CHECK(s.min_modulus >= 2 - 1e-12L);
  CHECK(s.max_modulus <= 8 + 1e-12L);
  auto t = sample_oracle(R({3, 4}), 100000, 5);
  CHECK(t.min_modulus >= 1 - 1e-12L);
  CHECK(t.max_modulus <= 7 + 1e-12L);
  auto [lo, hi] = oracle::annulus_monte_carlo({1, 2, 5}, 100000, 9);
  CHECK(lo >= 2 - 1e-12L);
  CHECK(hi <= 8 + 1e-12L);
  CHECK(lo < 2.2L);
  CHECK(hi > 7.8L);
  CHECK(sample_oracle(R({1, 2, 5}), 5000, 77, 1).min_modulus == sample_oracle(R({1, 2, 5}), 5000, 77, 1).min_modulus);
}

TEST_CASE("inner radius closed form on random lists") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.01, 10);
  for (int i = 0; i < 2000; ++i) {
    std::vector<Real> r(1 + i % 7);
    for (auto& x : r) x = u(gen);
    Real sum = 0, mx = 0;
    for (Real x : r) {
      sum += x;
      mx = std::max(mx, x);
    }
    CHECK(radii(r).inner == doctest::Approx(static_cast<double>(std::max<Real>(0, 2 * mx - sum))));
  }
}
