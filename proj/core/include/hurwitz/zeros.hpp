#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hurwitz/errors.hpp"
#include "hurwitz/eval.hpp"
#include "hurwitz/kronecker.hpp"
#include "hurwitz/precision.hpp"
#include "hurwitz/twist.hpp"

namespace hurwitz::zeros {

/// Analytic function of s, evaluated pointwise. Must be safe to call from
/// several threads at once.
using Evaluator = std::function<Complex(Complex)>;

struct Rectangle {
  Real sigma_min = 0;
  Real sigma_max = 0;
  Real t_min = 0;
  Real t_max = 0;
};

struct Circle {
  Complex centre;
  Real radius = 0;
};

struct QuadratureParams {
  std::size_t initial_points = 256;    // nodes before adaptive refinement
  Real max_step = 0.5L;                // largest accepted argument change per segment
  Real min_modulus = 1e-10L;           // |F| below this on the contour means ZeroOnBoundary
  std::size_t max_evaluations = 4'000'000;
  int refinements = 4;                 // passes with halved max_step before QuadratureStalled
  unsigned threads = 0;
};

struct CountResult {
  int count = 0;
  Real winding = 0;          // raw change of argument / 2 pi
  Real min_modulus = 0;      // over all evaluated contour points
  std::size_t evaluations = 0;
};

/// Number of zeros inside the contour by tracking arg F along it.
/// The rectangle must lie in sigma > 1.
CountResult argument_count_detailed(const Evaluator& F, const Rectangle& rect, const QuadratureParams& params = {});
CountResult argument_count_detailed(const Evaluator& F, const Circle& circle, const QuadratureParams& params = {});
int argument_count(const Evaluator& F, const Rectangle& rect, const QuadratureParams& params = {});

enum class Method { ArgumentPrincipleNewton, RouchePipeline };

struct RoucheCertificate {
  Real sigma0 = 0;
  Real delta1 = 0;
  Real t = 0;
  Real eps_min = 0;          // certified lower bound for |F| on the circle
  Real sup_diff = 0;         // certified upper bound for |G - F| on the circle
  std::size_t samples = 0;
  Real margin = 0;           // eps_min - sup_diff
  Real sampled_min = 0;      // min |F| over the samples
  Real sampled_sup = 0;      // max |G - F| over the samples
  Real lipschitz_f = 0;
  Real lipschitz_diff = 0;
  Real spacing = 0;          // farthest distance from a circle point to a sample
  Real eval_tol = 0;
  Real region_tail = 0;      // sum_{n >= N} 2|f(n)| (n+alpha)^{-1-theta}, reported only
  int count_f = -1;
  int count_g = -1;

  bool valid() const { return margin > 0 && count_f == count_g && count_f >= 0; }
};

struct ZeroRecord {
  ComplexPoint s;
  Real residual = 0;
  Method method = Method::ArgumentPrincipleNewton;
  std::optional<RoucheCertificate> certificate;
};

/// Newton iteration with a central-difference derivative (step 1e-6), at
/// most 50 steps. LeftHalfPlane if an iterate reaches sigma <= 1,
/// NoConvergence otherwise.
ZeroRecord newton_refine(const Evaluator& F, ComplexPoint s0, Real tol = 1e-12L, int max_iterations = 50);

/// Rouche comparison of F and G on |s - centre| = radius from `samples`
/// equally spaced points. lipschitz_f bounds |F'| and lipschitz_diff bounds
/// |G' - F'| on the circle; eval_tol bounds the evaluation error of each
/// value. FVanishesOnCircle if the certified lower bound for |F| is not
/// positive. A non-positive margin is returned, not thrown.
RoucheCertificate rouche_certify(const Evaluator& F, const Evaluator& G, Circle circle, std::size_t samples,
                                 Real lipschitz_f, Real lipschitz_diff, Real eval_tol,
                                 const QuadratureParams& params = {});

/// sum_n |f(n)| log(n+alpha) (n+alpha)^{-sigma_min}: bounds |L'|, |F'| for
/// every unimodular twist on Re s >= sigma_min > 1.
Real derivative_bound(const PeriodicFunction& f, Real alpha, Real sigma_min);

/// F against s -> L(s + it, f, alpha) on the circle |s - sigma0| = delta1.
/// region_tail is added to sup_diff and recorded in the certificate.
RoucheCertificate rouche_check(const PeriodicFunction& f, const AlphaParam& alpha, const twist::TwistedSeries& F,
                               Real sigma0, Real delta1, Real t, std::size_t samples = 720,
                               const QuadratureParams& params = {}, Real region_tail = 0);

struct PipelineBudget {
  std::size_t kronecker_terms = 4;   // N: terms whose phases Kronecker controls
  Real t_min = 1;                    // the T of the hypothesis
  Real max_t = 2e4L;
  std::uint64_t max_iterations = 20'000'000;
  int attempts = 3;                  // successive Kronecker solutions tried
  std::size_t samples = 720;
  std::optional<Real> delta1;        // circle radius; (sigma0 - 1)/2 when absent
  std::optional<Real> theta;         // (sigma0 - delta1 - 1)/2 when absent
  std::optional<Real> epsilon;       // target for |L - F|; eps_min of F when absent
  bool region_tail = true;           // add 2 sum_{n>=N} |f(n)| (n+alpha)^{-1-theta} to sup_diff
  Real newton_tol = 1e-12L;
  unsigned threads = 0;
};

struct StageFailure {
  std::string stage;
  ErrorCode code;
  std::string message;
  std::map<std::string, Real> numbers;
};

struct StageReport {
  std::string stage;
  std::map<std::string, Real> numbers;
};

struct PipelineResult {
  std::optional<ZeroRecord> record;
  std::optional<StageFailure> failure;
  std::vector<StageReport> stages;
};

/// residue -> truncation -> sigma0 -> circle -> plan -> kronecker -> rouche
/// -> newton. Never throws for stage failures: they come back as data. A
/// record is returned only with a valid certificate and a Newton zero
/// inside the certified disk.
PipelineResult find_zero_pipeline(const PeriodicFunction& f, const AlphaParam& alpha, Real delta,
                                  const PipelineBudget& budget = {});

}  // namespace hurwitz::zeros
