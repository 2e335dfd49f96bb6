#include "hurwitz/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hurwitz/errors.hpp"
#include "hurwitz/parallel.hpp"

namespace hurwitz::annulus {

namespace {

Real wrap_angle(Real theta) {
  Real w = std::fmod(theta, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0;
  return w;
}

}  // namespace

AnnulusSpec::AnnulusSpec(std::span<const Real> radii) : radii_(radii.begin(), radii.end()) {
  if (radii_.empty()) fail(ErrorCode::EmptyList, "annulus needs at least one radius");
  for (Real r : radii_) {
    if (!(r > 0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "radii must be positive");
  }
  sorted_ = radii_;
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.assign(sorted_.size() + 1, 0);
  for (std::size_t i = 0; i < sorted_.size(); ++i) prefix_[i + 1] = prefix_[i] + sorted_[i];
  const Real largest = sorted_.back();
  const Real rest = prefix_[sorted_.size() - 1];
  inner_ = rest <= largest ? largest - rest : 0;
}

Radii radii(std::span<const Real> r) {
  const AnnulusSpec spec(r);
  return {spec.outer(), spec.inner()};
}

bool contains(const AnnulusSpec& spec, Complex z) {
  const Real m = std::abs(z);
  return spec.inner() <= m && m <= spec.outer();
}

Complex evaluate(std::span<const Real> r, std::span<const Real> phases) {
  Complex sum = 0;
  for (std::size_t i = 0; i < r.size(); ++i) sum += std::polar(r[i], phases[i]);
  return sum;
}

std::vector<Real> realize(const AnnulusSpec& spec, Complex z, Real tol) {
  const Real modulus = std::abs(z);
  if (modulus < spec.inner() - tol || modulus > spec.outer() + tol) {
    fail(ErrorCode::NotInAnnulus, "target modulus outside [T, R]");
  }
  const auto radii = spec.radii();
  const std::size_t n = radii.size();

  // Largest radius first; the residual target must stay inside the annulus of
  // the remaining radii.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });

  std::vector<Real> phases(n, 0);
  Complex target = z;
  Real rest_outer = spec.outer();
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t idx = order[step];
    const Real r = radii[idx];
    rest_outer -= r;
    const Real w = std::abs(target);
    if (step + 1 == n) {
      phases[idx] = w > 0 ? wrap_angle(std::arg(target)) : 0;
      break;
    }
    // Annulus of the remaining radii.
    const Real rest_largest = radii[order[step + 1]];
    const Real rest_inner = std::max<Real>(0, 2 * rest_largest - rest_outer);
    // Moduli of target - c r reachable as c turns: [|w - r|, w + r].
    const Real lo = std::max(rest_inner, std::fabs(w - r));
    const Real hi = std::min(rest_outer, w + r);
    // lo > hi only through rounding on a boundary.
    const Real rho = (lo + hi) / 2;
    Real theta;
    if (w == 0) {
      theta = 0;
    } else {
      Real cos_phi = (w * w + r * r - rho * rho) / (2 * w * r);
      cos_phi = std::clamp<Real>(cos_phi, -1, 1);
      const Real phi = std::acos(cos_phi);
      const Real base = std::arg(target);
      const Real a1 = wrap_angle(base - phi);
      const Real a2 = wrap_angle(base + phi);
      theta = std::min(a1, a2);
    }
    phases[idx] = theta;
    target -= std::polar(r, theta);
  }

  const Real error = std::abs(evaluate(radii, phases) - z);
  if (error > tol) {
    fail(ErrorCode::NotInAnnulus, "realization residual exceeds tolerance");
  }
  return phases;
}

SampleStats sample_oracle(std::span<const Real> r, std::uint64_t k, std::uint64_t seed,
                          unsigned threads) {
  if (r.empty()) fail(ErrorCode::EmptyList, "annulus needs at least one radius");
  if (k == 0) fail(ErrorCode::InvalidArgument, "need at least one sample");
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (k + kChunk - 1) / kChunk;
  std::vector<SampleStats> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (c + 1)));
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    SampleStats stats{std::numeric_limits<Real>::infinity(), 0};
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(k, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      Complex sum = 0;
      for (Real ri : r) sum += std::polar(ri, static_cast<Real>(angle(rng)));
      const Real m = std::abs(sum);
      stats.min_modulus = std::min(stats.min_modulus, m);
      stats.max_modulus = std::max(stats.max_modulus, m);
    }
    partial[c] = stats;
  });
  SampleStats out{std::numeric_limits<Real>::infinity(), 0};
  for (const auto& s : partial) {
    out.min_modulus = std::min(out.min_modulus, s.min_modulus);
    out.max_modulus = std::max(out.max_modulus, s.max_modulus);
  }
  return out;
}

}  // namespace hurwitz::annulus
