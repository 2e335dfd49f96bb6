#include <doctest.h>

#include <cmath>
#include <random>

#include <hurwitz/errors.hpp>
#include <hurwitz/kronecker.hpp>

#include "oracles.hpp"

using namespace hurwitz;
using namespace hurwitz::kronecker;

namespace {

Real replay(const KroneckerProblem& p, Real t) {
  Real worst = 0;
  for (std::size_t i = 0; i < p.frequencies.size(); ++i) {
    worst = std::max(worst, oracle::circle_distance(t * p.frequencies[i] - p.targets[i]));
  }
  return worst;
}

SearchBudget grid_budget(Real max_t = 1e7L) {
  SearchBudget b;
  b.max_t = max_t;
  b.strategy = Strategy::Grid;
  return b;
}

}  // namespace

TEST_CASE("single frequency closed form") {
  const Real w = std::log(2.0L) / (2 * kPi);
  const auto sol = solve({{w}, {0}, 0.01L, 1}, grid_budget());
  CHECK(sol.t == doctest::Approx(9.06472028365).epsilon(1e-11));
  CHECK(std::abs(sol.t - 1 / w) < 1e-9L);
  REQUIRE(sol.integer_parts.size() == 1);
  CHECK(sol.integer_parts[0] == 1);
  CHECK(sol.max_error < 1e-12L);
}

TEST_CASE("homogeneous single frequency skips t = 0") {
  const Real w = 0.37L;
  const auto sol = solve({{w}, {0}, 0.4L, 0}, grid_budget());
  CHECK(sol.t > 0);
  CHECK(std::abs(sol.t - 1 / w) < 1e-9L);
}

TEST_CASE("three log frequencies re-verify independently") {
  std::vector<Real> w;
  for (int n = 0; n < 3; ++n) w.push_back(std::log(n + kPi) / (2 * kPi));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    KroneckerProblem p{w, {u(gen), u(gen), u(gen)}, 0.05L, 0};
    const auto sol = solve(p, grid_budget());
    CHECK(replay(p, sol.t) < 0.05L);
    CHECK(sol.t > 0);
    // A coarse independent scan finds some witness at or below the solver's t.
    bool witness = false;
    const Real step = 0.05L / (4 * *std::max_element(w.begin(), w.end()));
    for (Real t = step; t <= sol.t + step && !witness; t += step) witness = replay(p, t) < 0.05L;
    CHECK(witness);
  }
}

TEST_CASE("verify examples") {
  KroneckerProblem p{{0.3L, 0.7L}, {0, 0}, 0.1L, -1};
  CHECK(verify(p, 0) == 0);
  KroneckerProblem q{{0.5L}, {0}, 0.1L, 0};
  CHECK(verify(q, 1) == doctest::Approx(0.5));
  CHECK(phase_distance(2.75L) == doctest::Approx(0.25));
}

TEST_CASE("grid returns the earliest admissible window") {
  KroneckerProblem p{{1.0L, std::sqrt(2.0L)}, {0.2L, 0.6L}, 0.05L, 0};
  const auto sol = solve(p, grid_budget());
  CHECK(replay(p, sol.t) < 0.05L);
  const Real step = 1e-4L;
  for (Real t = 0; t < sol.t - 0.06L; t += step) {
    if (replay(p, t) < 0.045L) {
      FAIL("earlier admissible t at ", static_cast<double>(t));
      break;
    }
  }
}

TEST_CASE("lattice strategy returns verified solutions") {
  std::vector<Real> w;
  for (int n = 0; n < 6; ++n) w.push_back(std::log(n + kPi) / (2 * kPi));
  KroneckerProblem p{w, {0.1L, 0.9L, 0.3L, 0.5L, 0.2L, 0.6L}, 0.2L, 10};
  SearchBudget b;
  b.max_t = 1e8L;
  b.strategy = Strategy::Lattice;
  const auto sol = solve(p, b);
  CHECK(sol.t > 10);
  CHECK(replay(p, sol.t) < 0.2L);
}

TEST_CASE("phase transfer constant 2 pi") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 100; ++i) {
    const Real x = u(gen);
    CHECK(std::abs(std::polar(Real(1), -2 * kPi * x) - Complex(1)) <= 2 * kPi * phase_distance(x) + 1e-15L);
  }
}

TEST_CASE("larger budgets keep earlier answers") {
  KroneckerProblem p{{0.21L, 0.77L, 0.43L}, {0.1L, 0.4L, 0.8L}, 0.05L, 0};
  const auto a = solve(p, grid_budget(1e5L));
  const auto b = solve(p, grid_budget(1e7L));
  CHECK(a.t == b.t);
}

TEST_CASE("invalid and degenerate problems") {
  auto code = [](const KroneckerProblem& p, SearchBudget b) {
    try {
      solve(p, b);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code({{0.3L, 0.3L}, {0, 0.5L}, 0.1L, 0}, grid_budget()) == ErrorCode::DegenerateInput);
  CHECK(code({{0.0L}, {0.5L}, 0.1L, 0}, grid_budget()) == ErrorCode::DegenerateInput);
  CHECK_THROWS_AS(solve({{0.3L}, {0.1L, 0.2L}, 0.1L, 0}, grid_budget()), Error);
  CHECK_THROWS_AS(solve({{0.3L}, {0.1L}, 0.6L, 0}, grid_budget()), Error);
  // Rationally dependent frequencies with inconsistent targets never succeed.
  CHECK(code({{0.5L, 1.0L}, {0.0L, 0.5L}, 0.05L, 0}, grid_budget(1e4L)) == ErrorCode::BudgetExhausted);
}

TEST_CASE("character targets on a multiplicative basis") {
  SUBCASE("single unit with chi = -1") {
    const AlphaParam alpha = AlphaParam::quadratic(1, 1, 2);
    ideals::MultiplicativeBasis basis;
    const ideals::QuadNumber u{1, 1, 2};
    basis.elements = {u};
    basis.logs = {u.log_abs()};
    basis.exponents = {{1}};
    basis.exponent_bound = 1;
    const std::vector<Complex> chi{Complex(-1, 0)};
    SearchBudget b;
    b.max_t = 1e6L;
    const auto r = solve_character_targets(alpha, basis, chi, 0.1L, 0, b);
    CHECK(r.solution.t == doctest::Approx(static_cast<double>(kPi / std::log(1 + std::sqrt(2.0L)))).epsilon(0.02));
    CHECK(std::abs(std::exp(Complex(0, -r.solution.t * basis.logs[0])) + Complex(1)) < 0.1L);
  }
  SUBCASE("shifts 0..3 with random unit targets") {
    const AlphaParam alpha = AlphaParam::quadratic(0, 1, 2);
    const auto gens = ideals::shifted_set(alpha, 3);
    const auto basis = ideals::multiplicative_basis(gens);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    std::vector<Complex> chi;
    for (std::size_t j = 0; j < basis.size(); ++j) chi.push_back(std::polar(Real(1), static_cast<Real>(u(gen))));
    SearchBudget b;
    b.max_t = 1e8L;
    const auto r = solve_character_targets(alpha, basis, chi, 0.2L, 1, b);
    CHECK(r.solution.t > 1);
    for (std::size_t n = 0; n < gens.size(); ++n) {
      const Complex lhs = std::exp(Complex(0, -r.solution.t * std::log(gens[n].to_real())));
      CHECK(std::abs(lhs - character_value(basis, chi, n)) < 0.2L);
    }
  }
}
