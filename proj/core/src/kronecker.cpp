#include "hurwitz/kronecker.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "hurwitz/errors.hpp"
#include "hurwitz/parallel.hpp"

namespace hurwitz::kronecker {

namespace {

/// Frequencies made positive: t w - b - x = sign (t |w| - sign b - sign x).
struct Normalized {
  std::vector<Real> w;
  std::vector<Real> b;
  std::size_t fast = 0;
};

Normalized normalize(const KroneckerProblem& problem) {
  Normalized out;
  const std::size_t N = problem.frequencies.size();
  for (std::size_t n = 0; n < N; ++n) {
    const Real w = problem.frequencies[n];
    const Real b = problem.targets[n];
    out.w.push_back(std::fabs(w));
    out.b.push_back(w < 0 ? -b : b);
    if (out.w[n] > out.w[out.fast]) out.fast = n;
  }
  return out;
}

void validate(const KroneckerProblem& problem) {
  const std::size_t N = problem.frequencies.size();
  if (N == 0) fail(ErrorCode::InvalidArgument, "no frequencies");
  if (problem.targets.size() != N) fail(ErrorCode::InvalidArgument, "frequencies and targets differ in length");
  if (!(problem.delta > 0 && problem.delta < 0.5L)) fail(ErrorCode::InvalidArgument, "delta must lie in (0, 1/2)");
  if (!std::isfinite(problem.t_min)) fail(ErrorCode::InvalidArgument, "t_min must be finite");
  for (std::size_t i = 0; i < N; ++i) {
    if (!std::isfinite(problem.frequencies[i]) || !std::isfinite(problem.targets[i]))
      fail(ErrorCode::InvalidArgument, "non-finite frequency or target");
    if (problem.frequencies[i] == 0) fail(ErrorCode::DegenerateInput, "zero frequency");
    for (std::size_t j = 0; j < i; ++j)
      if (std::fabs(problem.frequencies[i]) == std::fabs(problem.frequencies[j]))
        fail(ErrorCode::DegenerateInput, "repeated frequency");
  }
}

struct Interval {
  Real lo;
  Real hi;
  std::vector<std::int64_t> x;  // integer parts in normalized coordinates
};

/// max_n |w_n t - b_n - x_n| over the normalized problem.
Real local_error(const Normalized& p, const std::vector<std::int64_t>& x, Real t) {
  Real g = 0;
  for (std::size_t n = 0; n < p.w.size(); ++n)
    g = std::max(g, std::fabs(p.w[n] * t - p.b[n] - static_cast<Real>(x[n])));
  return g;
}

/// Exact minimizer of the convex piecewise-linear error on [lo, hi]: the
/// optimum sits on an endpoint, a zero, or a crossing of two residuals.
std::pair<Real, Real> minimize(const Normalized& p, const Interval& iv) {
  const std::size_t N = p.w.size();
  Real best_t = iv.lo;
  Real best_g = local_error(p, iv.x, iv.lo);
  auto consider = [&](Real t) {
    if (!(t >= iv.lo && t <= iv.hi)) return;
    const Real g = local_error(p, iv.x, t);
    if (g < best_g || (g == best_g && t < best_t)) {
      best_g = g;
      best_t = t;
    }
  };
  consider(iv.hi);
  for (std::size_t i = 0; i < N; ++i) {
    const Real ei = p.b[i] + static_cast<Real>(iv.x[i]);
    consider(ei / p.w[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const Real ej = p.b[j] + static_cast<Real>(iv.x[j]);
      if (p.w[i] != p.w[j]) consider((ei - ej) / (p.w[i] - p.w[j]));
      consider((ei + ej) / (p.w[i] + p.w[j]));
    }
  }
  return {best_t, best_g};
}

struct Candidate {
  Real t;
  Real error;
};

/// Best point of the k-th window of the fastest frequency, if any window
/// point beats delta at an optimum beyond t_min.
std::optional<Candidate> scan_window(const Normalized& p, Real delta, Real t_min, std::int64_t k) {
  const std::size_t N = p.w.size();
  const std::size_t f = p.fast;
  std::vector<Interval> live;
  {
    Interval first{(p.b[f] + static_cast<Real>(k) - delta) / p.w[f],
                   (p.b[f] + static_cast<Real>(k) + delta) / p.w[f], std::vector<std::int64_t>(N, 0)};
    first.x[f] = k;
    live.push_back(std::move(first));
  }
  for (std::size_t n = 0; n < N && !live.empty(); ++n) {
    if (n == f) continue;
    std::vector<Interval> next;
    for (const auto& iv : live) {
      const Real a = iv.lo * p.w[n] - p.b[n];
      const Real c = iv.hi * p.w[n] - p.b[n];
      const auto x_lo = static_cast<std::int64_t>(std::floor(a - delta));
      const auto x_hi = static_cast<std::int64_t>(std::ceil(c + delta));
      for (std::int64_t x = x_lo; x <= x_hi; ++x) {
        const Real lo = std::max(iv.lo, (p.b[n] + static_cast<Real>(x) - delta) / p.w[n]);
        const Real hi = std::min(iv.hi, (p.b[n] + static_cast<Real>(x) + delta) / p.w[n]);
        if (lo < hi) {
          Interval sub{lo, hi, iv.x};
          sub.x[n] = x;
          next.push_back(std::move(sub));
        }
      }
    }
    live = std::move(next);
  }
  std::optional<Candidate> best;
  for (const auto& iv : live) {
    const auto [t, g] = minimize(p, iv);
    if (t <= t_min || g >= delta) continue;
    if (!best || t < best->t) best = Candidate{t, g};
  }
  return best;
}

KroneckerSolution finish(const KroneckerProblem& problem, Real t, std::uint64_t iterations) {
  KroneckerSolution out;
  out.t = t;
  out.iterations = iterations;
  for (std::size_t n = 0; n < problem.frequencies.size(); ++n) {
    const Real phase = t * problem.frequencies[n] - problem.targets[n];
    out.integer_parts.push_back(static_cast<std::int64_t>(std::llround(phase)));
  }
  out.max_error = verify(problem, t);
  return out;
}

bool acceptable(const KroneckerProblem& problem, Real t, Real max_t) {
  return t > problem.t_min && t <= max_t && verify(problem, t) < problem.delta;
}

KroneckerSolution solve_grid(const KroneckerProblem& problem, const Normalized& p, const SearchBudget& budget) {
  const std::size_t f = p.fast;
  const Real delta = problem.delta;
  const auto k0 = static_cast<std::int64_t>(std::floor(problem.t_min * p.w[f] - p.b[f] - delta));
  const Real end_phase = budget.max_t * p.w[f] - p.b[f] + delta;
  if (!std::isfinite(end_phase) || end_phase > 9e18L) fail(ErrorCode::InvalidArgument, "max_t too large");
  const auto k_end = static_cast<std::int64_t>(std::ceil(end_phase));
  const auto window_cap = static_cast<std::int64_t>(std::min<std::uint64_t>(budget.max_iterations, 9'000'000'000'000'000'000ULL));

  constexpr std::int64_t kChunk = 1024;
  const unsigned workers = resolve_threads(budget.threads);
  std::int64_t k = k0;
  while (k <= k_end && k - k0 < window_cap) {
    const std::int64_t batch_end = std::min({k_end + 1, k0 + window_cap, k + kChunk * static_cast<std::int64_t>(workers)});
    const auto chunks = static_cast<std::size_t>((batch_end - k + kChunk - 1) / kChunk);
    std::vector<std::optional<std::pair<std::int64_t, Real>>> found(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
      const std::int64_t from = k + static_cast<std::int64_t>(c) * kChunk;
      const std::int64_t to = std::min(batch_end, from + kChunk);
      for (std::int64_t j = from; j < to; ++j) {
        if (auto hit = scan_window(p, delta, problem.t_min, j)) {
          if (acceptable(problem, hit->t, budget.max_t)) {
            found[c] = std::make_pair(j, hit->t);
            return;
          }
        }
      }
    });
    for (const auto& hit : found)
      if (hit) return finish(problem, hit->second, static_cast<std::uint64_t>(hit->first - k0 + 1));
    k = batch_end;
  }
  fail(ErrorCode::BudgetExhausted, "grid search exhausted after " + std::to_string(k - k0) + " windows");
}

// ------------------------------------------------------------------ lattice

using Vec = std::vector<Real>;

Real dot(const Vec& x, const Vec& y) {
  Real s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

struct GramSchmidt {
  std::vector<Vec> star;
  std::vector<Vec> mu;
  Vec norm2;
};

GramSchmidt gram_schmidt(const std::vector<Vec>& b) {
  const std::size_t n = b.size();
  GramSchmidt gs{std::vector<Vec>(n), std::vector<Vec>(n, Vec(n, 0)), Vec(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    gs.star[i] = b[i];
    for (std::size_t j = 0; j < i; ++j) {
      gs.mu[i][j] = gs.norm2[j] > 0 ? dot(b[i], gs.star[j]) / gs.norm2[j] : 0;
      for (std::size_t c = 0; c < b[i].size(); ++c) gs.star[i][c] -= gs.mu[i][j] * gs.star[j][c];
    }
    gs.norm2[i] = dot(gs.star[i], gs.star[i]);
  }
  return gs;
}

void lll_reduce(std::vector<Vec>& b, Real lovasz = 0.99L) {
  const std::size_t n = b.size();
  std::size_t k = 1;
  GramSchmidt gs = gram_schmidt(b);
  for (int guard = 0; k < n && guard < 100000; ++guard) {
    for (std::size_t jj = k; jj-- > 0;) {
      const Real q = std::round(gs.mu[k][jj]);
      if (q != 0) {
        for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[jj][c];
        gs = gram_schmidt(b);
      }
    }
    if (gs.norm2[k] >= (lovasz - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.norm2[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gs = gram_schmidt(b);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
}

/// Lattice vector closest to y by nearest-plane rounding.
Vec babai(const std::vector<Vec>& b, const Vec& y) {
  const GramSchmidt gs = gram_schmidt(b);
  Vec w = y;
  for (std::size_t j = b.size(); j-- > 0;) {
    if (gs.norm2[j] == 0) continue;
    const Real c = std::round(dot(w, gs.star[j]) / gs.norm2[j]);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[j][i];
  }
  Vec v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v[i] = y[i] - w[i];
  return v;
}

KroneckerSolution solve_lattice(const KroneckerProblem& problem, const Normalized& p, const SearchBudget& budget) {
  const std::size_t N = p.w.size();
  const std::size_t f = p.fast;
  if (N == 1) return solve_grid(problem, p, budget);
  const Real delta = problem.delta;

  std::vector<std::size_t> others;
  for (std::size_t n = 0; n < N; ++n)
    if (n != f) others.push_back(n);
  const std::size_t m = others.size();
  Vec ratio(m);
  Vec tau(m);
  for (std::size_t j = 0; j < m; ++j) {
    ratio[j] = p.w[others[j]] / p.w[f];
    tau[j] = p.b[others[j]] - p.b[f] * ratio[j];
  }

  const Real k_min = std::floor(problem.t_min * p.w[f] - p.b[f] - delta);
  const Real k_span = budget.max_t * p.w[f] - p.b[f] + delta - k_min;
  const Real weight = delta;
  constexpr std::size_t kNeighbours = 4;

  std::uint64_t iterations = 0;
  for (Real Q = 8; Q <= 4 * std::max(k_span, Real(8)); Q *= 4) {
    std::vector<Vec> basis;
    Vec lead(m + 1);
    for (std::size_t j = 0; j < m; ++j) lead[j] = ratio[j];
    lead[m] = weight / Q;
    basis.push_back(lead);
    for (std::size_t j = 0; j < m; ++j) {
      Vec e(m + 1, 0);
      e[j] = 1;
      basis.push_back(e);
    }
    lll_reduce(basis);
    Vec target(m + 1);
    for (std::size_t j = 0; j < m; ++j) target[j] = tau[j];
    target[m] = weight * (k_min + std::min(Q, k_span) / 2) / Q;
    const Vec centre = babai(basis, target);

    const std::size_t L = std::min(kNeighbours, basis.size());
    std::size_t combos = 1;
    for (std::size_t i = 0; i < L; ++i) combos *= 3;
    std::optional<Real> best;
    std::vector<std::int64_t> tried;
    for (std::size_t code = 0; code < combos; ++code) {
      Vec v = centre;
      std::size_t rest = code;
      for (std::size_t i = 0; i < L; ++i, rest /= 3) {
        const Real e = static_cast<Real>(rest % 3) - 1;
        if (e != 0)
          for (std::size_t c = 0; c <= m; ++c) v[c] += e * basis[i][c];
      }
      const auto k = static_cast<std::int64_t>(std::llround(v[m] * Q / weight));
      if (static_cast<Real>(k) < k_min || static_cast<Real>(k) > k_min + k_span) continue;
      if (std::find(tried.begin(), tried.end(), k) != tried.end()) continue;
      tried.push_back(k);
      if (++iterations > budget.max_iterations)
        fail(ErrorCode::BudgetExhausted, "lattice search exhausted its iteration budget");
      if (auto hit = scan_window(p, delta, problem.t_min, k))
        if (acceptable(problem, hit->t, budget.max_t) && (!best || hit->t < *best)) best = hit->t;
    }
    if (best) return finish(problem, *best, iterations);
  }
  fail(ErrorCode::BudgetExhausted, "lattice search found no window below max_t");
}

}  // namespace

Real phase_distance(Real x) { return std::fabs(x - std::round(x)); }

Real verify(const KroneckerProblem& problem, Real t) {
  Real worst = 0;
  for (std::size_t n = 0; n < problem.frequencies.size() && n < problem.targets.size(); ++n)
    worst = std::max(worst, phase_distance(t * problem.frequencies[n] - problem.targets[n]));
  return worst;
}

Strategy default_strategy(std::size_t frequencies) {
  return frequencies <= 4 ? Strategy::Grid : Strategy::Lattice;
}

KroneckerSolution solve(const KroneckerProblem& problem, const SearchBudget& budget) {
  validate(problem);
  if (!(budget.max_t > problem.t_min)) fail(ErrorCode::BudgetExhausted, "max_t does not exceed t_min");
  const Normalized p = normalize(problem);
  return budget.strategy == Strategy::Grid ? solve_grid(problem, p, budget) : solve_lattice(problem, p, budget);
}

Complex character_value(const ideals::MultiplicativeBasis& basis, std::span<const Complex> chi_on_basis,
                        std::size_t generator) {
  const auto& u = basis.exponents.at(generator);
  Real angle = 0;
  for (std::size_t j = 0; j < u.size(); ++j) angle += static_cast<Real>(u[j]) * std::arg(chi_on_basis[j]);
  return std::polar(Real(1), angle);
}

CharacterTargetSolution solve_character_targets(const AlphaParam& alpha, const ideals::MultiplicativeBasis& basis,
                                                std::span<const Complex> chi_on_basis, Real epsilon, Real t_min,
                                                const SearchBudget& budget) {
  const std::size_t l = basis.size();
  if (l == 0) fail(ErrorCode::EmptyList, "empty basis");
  if (chi_on_basis.size() != l) fail(ErrorCode::InvalidArgument, "one character value per basis element");
  for (const auto& c : chi_on_basis)
    if (std::fabs(std::abs(c) - 1) > 1e-9L) fail(ErrorCode::InvalidArgument, "character values must be unimodular");
  if (!(epsilon > 0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");

  // |e^{-2 pi i x} - e^{-2 pi i y}| <= 2 pi dist(x - y), and the exponents
  // amplify basis errors by at most M l.
  const Real M = static_cast<Real>(std::max<std::int64_t>(basis.exponent_bound, 1));
  CharacterTargetSolution out;
  out.phase_delta = std::min(epsilon / (kTwoPi * M * static_cast<Real>(l)), Real(0.49));

  KroneckerProblem problem;
  problem.delta = out.phase_delta;
  problem.t_min = t_min;
  for (std::size_t j = 0; j < l; ++j) {
    problem.frequencies.push_back(basis.logs[j] / kTwoPi);
    Real beta = -std::arg(chi_on_basis[j]) / kTwoPi;
    beta -= std::floor(beta);
    problem.targets.push_back(beta);
  }
  out.solution = solve(problem, budget);

  const Real a = alpha.value();
  for (std::size_t n = 0; n < basis.exponents.size(); ++n) {
    const Real log_x = std::log(static_cast<Real>(n) + a);
    const Complex value = std::polar(Real(1), -out.solution.t * log_x);
    out.max_error = std::max(out.max_error, std::abs(value - character_value(basis, chi_on_basis, n)));
  }
  if (!(out.max_error < epsilon))
    fail(ErrorCode::BudgetExhausted, "solution misses the character targets on the generating set");
  return out;
}

}  // namespace hurwitz::kronecker
