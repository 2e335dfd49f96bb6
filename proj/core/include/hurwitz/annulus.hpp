#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hurwitz/precision.hpp"

namespace hurwitz::annulus {

/// The set { sum c_i r_i : |c_i| = 1 } for positive radii r_i. It is the
/// closed annulus T <= |z| <= R with R = sum r_i and
/// T = max(0, r_max - (R - r_max)).
class AnnulusSpec {
 public:
  explicit AnnulusSpec(std::span<const Real> radii);

  /// Radii in the caller's order.
  std::span<const Real> radii() const { return radii_; }
  /// Radii sorted ascending.
  std::span<const Real> sorted() const { return sorted_; }
  /// R_0 = 0, R_i = r_1 + ... + r_i over the sorted radii.
  std::span<const Real> prefix_sums() const { return prefix_; }

  Real outer() const { return prefix_.back(); }
  Real inner() const { return inner_; }

 private:
  std::vector<Real> radii_;
  std::vector<Real> sorted_;
  std::vector<Real> prefix_;
  Real inner_ = 0;
};

struct Radii {
  Real outer;
  Real inner;
};

/// (R_n, T_n). Throws EmptyList for no radii, InvalidArgument for r_i <= 0.
Radii radii(std::span<const Real> r);

bool contains(const AnnulusSpec& spec, Complex z);

/// Phases theta_i in [0, 2 pi), one per radius in input order, with
/// |sum e^{i theta_i} r_i - z| <= tol. Throws NotInAnnulus when z lies
/// outside the annulus by more than tol.
std::vector<Real> realize(const AnnulusSpec& spec, Complex z, Real tol = 1e-12L);

/// sum r_i e^{i theta_i}.
Complex evaluate(std::span<const Real> r, std::span<const Real> phases);

struct SampleStats {
  Real min_modulus;
  Real max_modulus;
};

/// Min and max of |sum c_i r_i| over k uniformly random phase draws.
/// Deterministic given the seed; chunks run on `threads` workers.
SampleStats sample_oracle(std::span<const Real> r, std::uint64_t k, std::uint64_t seed,
                          unsigned threads = 1);

}  // namespace hurwitz::annulus
