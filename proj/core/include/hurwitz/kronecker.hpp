#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hurwitz/eval.hpp"
#include "hurwitz/ideals.hpp"
#include "hurwitz/precision.hpp"

namespace hurwitz::kronecker {

/// Find t > t_min with |t w_n - b_n - x_n| < delta for integers x_n.
struct KroneckerProblem {
  std::vector<Real> frequencies;
  std::vector<Real> targets;
  Real delta = 0;
  Real t_min = 0;
};

enum class Strategy { Grid, Lattice };

struct SearchBudget {
  Real max_t = 1e9L;
  std::uint64_t max_iterations = 100'000'000;
  Strategy strategy = Strategy::Grid;
  unsigned threads = 1;
};

struct KroneckerSolution {
  Real t = 0;
  std::vector<std::int64_t> integer_parts;  // x_n, the nearest integer to t w_n - b_n
  Real max_error = 0;                       // max_n |t w_n - b_n - x_n|
  std::uint64_t iterations = 0;             // windows examined
};

/// Distance from x to the nearest integer.
Real phase_distance(Real x);

/// max_n dist(t w_n - b_n, Z).
Real verify(const KroneckerProblem& problem, Real t);

/// Returns the earliest solution found within the budget. Grid sweeps the
/// windows of the fastest frequency in order, so its answer is the least
/// admissible t up to the window resolution; Lattice guesses window indices
/// by nearest-plane rounding and is meant for five or more frequencies.
/// Throws DegenerateInput for zero or repeated frequencies, BudgetExhausted
/// when max_t or max_iterations is reached.
KroneckerSolution solve(const KroneckerProblem& problem, const SearchBudget& budget);

/// Strategy matching the problem size.
Strategy default_strategy(std::size_t frequencies);

struct CharacterTargetSolution {
  KroneckerSolution solution;
  Real phase_delta = 0;   // delta used on the basis logarithms
  Real max_error = 0;     // max over the set of |(n + alpha)^{-it} - chi(n + alpha)|
};

/// Given chi on a multiplicative basis of {n + alpha : 0 <= n <= N}, find
/// t > t_min with |(n + alpha)^{-it} - chi(n + alpha)| < epsilon for every
/// generator. chi extends multiplicatively through the basis exponents.
CharacterTargetSolution solve_character_targets(const AlphaParam& alpha,
                                                const ideals::MultiplicativeBasis& basis,
                                                std::span<const Complex> chi_on_basis, Real epsilon,
                                                Real t_min, const SearchBudget& budget);

/// chi(n + alpha) through the basis exponents of the n-th generator.
Complex character_value(const ideals::MultiplicativeBasis& basis, std::span<const Complex> chi_on_basis,
                        std::size_t generator);

}  // namespace hurwitz::kronecker
