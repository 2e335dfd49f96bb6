#include "hurwitz/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hurwitz/parallel.hpp"

namespace hurwitz::zeros {
namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
constexpr Real kNewtonStep = 1e-6L;
constexpr Real kNewtonMaxDisplacement = 1e3L;
constexpr int kMaxBisectionDepth = 48;
constexpr Real kRoucheEvalTol = 1e-13L;
constexpr Real kRoucheEvalSlack = 1e-12L;

/// A piece of contour parametrized by u in [0, 1].
struct Piece {
  std::function<Complex(Real)> point;
  Real length = 0;
};

struct SegmentResult {
  Real change = 0;
  Real min_modulus = std::numeric_limits<Real>::infinity();
  std::size_t evaluations = 0;
  bool zero = false;
  bool stalled = false;
};

Real arg_change(Complex from, Complex to) { return std::arg(to / from); }

SegmentResult track_segment(const Evaluator& F, const Piece& piece, Real a, Complex Fa, Real b, Complex Fb,
                            const QuadratureParams& params, Real max_step) {
  struct Item {
    Real a, b;
    Complex Fa, Fb;
    int depth;
  };
  SegmentResult out;
  std::vector<Item> stack{{a, b, Fa, Fb, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const Real mid = (it.a + it.b) / 2;
    const Complex Fm = F(piece.point(mid));
    ++out.evaluations;
    const Real mod = std::abs(Fm);
    out.min_modulus = std::min(out.min_modulus, mod);
    if (!(mod >= params.min_modulus)) {
      out.zero = true;
      return out;
    }
    const Real whole = arg_change(it.Fa, it.Fb);
    const Real left = arg_change(it.Fa, Fm);
    const Real right = arg_change(Fm, it.Fb);
    if (std::abs(whole) <= max_step && std::abs(left + right - whole) < 1e-9L) {
      out.change += left + right;
      continue;
    }
    if (it.depth >= kMaxBisectionDepth || out.evaluations > params.max_evaluations) {
      out.stalled = true;
      return out;
    }
    stack.push_back({mid, it.b, Fm, it.Fb, it.depth + 1});
    stack.push_back({it.a, mid, it.Fa, Fm, it.depth + 1});
  }
  return out;
}

CountResult track_once(const Evaluator& F, const std::vector<Piece>& pieces, const QuadratureParams& params,
                       std::size_t initial_points, Real max_step) {
  Real total_length = 0;
  for (const auto& p : pieces) total_length += p.length;

  struct Node {
    std::size_t piece;
    Real u;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> piece_start;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    piece_start.push_back(nodes.size());
    const auto share = static_cast<std::size_t>(
        std::ceil(static_cast<Real>(initial_points) * pieces[i].length / total_length));
    const std::size_t n = std::max<std::size_t>(8, share);
    for (std::size_t k = 0; k <= n; ++k) nodes.push_back({i, static_cast<Real>(k) / static_cast<Real>(n)});
  }
  piece_start.push_back(nodes.size());

  std::vector<Complex> values(nodes.size());
  parallel_for(nodes.size(), params.threads,
               [&](std::size_t k) { values[k] = F(pieces[nodes[k].piece].point(nodes[k].u)); });

  CountResult out;
  out.evaluations = nodes.size();
  out.min_modulus = std::numeric_limits<Real>::infinity();
  for (const auto& v : values) {
    out.min_modulus = std::min(out.min_modulus, std::abs(v));
    if (!(std::abs(v) >= params.min_modulus)) {
      fail(ErrorCode::ZeroOnBoundary, "function vanishes on the contour (|F| = " +
                                          std::to_string(static_cast<double>(std::abs(v))) + ")");
    }
  }

  std::vector<std::size_t> segments;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t k = piece_start[i]; k + 1 < piece_start[i + 1]; ++k) segments.push_back(k);
  }
  std::vector<SegmentResult> results(segments.size());
  parallel_for(segments.size(), params.threads, [&](std::size_t i) {
    const std::size_t k = segments[i];
    results[i] = track_segment(F, pieces[nodes[k].piece], nodes[k].u, values[k], nodes[k + 1].u, values[k + 1],
                               params, max_step);
  });

  Real change = 0;
  for (const auto& r : results) {
    if (r.zero) fail(ErrorCode::ZeroOnBoundary, "function vanishes on the contour");
    if (r.stalled) fail(ErrorCode::QuadratureStalled, "argument tracking did not resolve a segment");
    change += r.change;
    out.evaluations += r.evaluations;
    out.min_modulus = std::min(out.min_modulus, r.min_modulus);
  }
  out.winding = change / (2 * kPi);
  out.count = static_cast<int>(std::lround(out.winding));
  if (out.evaluations > params.max_evaluations) {
    fail(ErrorCode::QuadratureStalled, "evaluation budget exhausted");
  }
  return out;
}

CountResult count_on(const Evaluator& F, const std::vector<Piece>& pieces, const QuadratureParams& params) {
  if (params.initial_points == 0 || !(params.max_step > 0) || params.max_step > kPi / 2) {
    fail(ErrorCode::InvalidArgument, "quadrature needs initial_points > 0 and 0 < max_step <= pi/2");
  }
  std::size_t points = params.initial_points;
  Real step = params.max_step;
  std::optional<int> previous;
  std::size_t spent = 0;
  for (int pass = 0; pass <= params.refinements; ++pass) {
    CountResult r = track_once(F, pieces, params, points, step);
    spent += r.evaluations;
    const bool integral = std::abs(r.winding - r.count) < 0.25L;
    if (integral && previous == r.count) {
      r.evaluations = spent;
      return r;
    }
    if (integral) previous = r.count;
    else previous.reset();
    points *= 2;
    step /= 2;
    if (spent > params.max_evaluations) break;
  }
  fail(ErrorCode::QuadratureStalled, "winding number did not stabilize under refinement");
}

std::vector<Piece> rectangle_pieces(const Rectangle& r) {
  if (!(r.sigma_min > 1) || !(r.sigma_min < r.sigma_max) || !(r.t_min < r.t_max) || !std::isfinite(r.sigma_max) ||
      !std::isfinite(r.t_min) || !std::isfinite(r.t_max)) {
    fail(ErrorCode::InvalidArgument, "rectangle needs 1 < sigma_min < sigma_max and t_min < t_max");
  }
  const Complex c0{r.sigma_min, r.t_min}, c1{r.sigma_max, r.t_min}, c2{r.sigma_max, r.t_max},
      c3{r.sigma_min, r.t_max};
  auto line = [](Complex a, Complex b) {
    return Piece{[a, b](Real u) { return a + (b - a) * u; }, std::abs(b - a)};
  };
  return {line(c0, c1), line(c1, c2), line(c2, c3), line(c3, c0)};
}

std::vector<Piece> circle_pieces(const Circle& c) {
  if (!(c.radius > 0) || !std::isfinite(c.radius)) fail(ErrorCode::InvalidArgument, "circle radius must be positive");
  const Complex centre = c.centre;
  const Real radius = c.radius;
  return {Piece{[centre, radius](Real u) { return centre + std::polar(radius, 2 * kPi * u); }, 2 * kPi * radius}};
}

PeriodicFunction absolute(const PeriodicFunction& f) {
  std::vector<Real> v(f.values().begin(), f.values().end());
  for (auto& x : v) x = std::abs(x);
  return PeriodicFunction(std::move(v));
}

std::string fmt(Real x) {
  std::ostringstream os;
  os.precision(6);
  os << static_cast<double>(x);
  return os.str();
}

}  // namespace

CountResult argument_count_detailed(const Evaluator& F, const Rectangle& rect, const QuadratureParams& params) {
  return count_on(F, rectangle_pieces(rect), params);
}

CountResult argument_count_detailed(const Evaluator& F, const Circle& circle, const QuadratureParams& params) {
  return count_on(F, circle_pieces(circle), params);
}

int argument_count(const Evaluator& F, const Rectangle& rect, const QuadratureParams& params) {
  return argument_count_detailed(F, rect, params).count;
}

ZeroRecord newton_refine(const Evaluator& F, ComplexPoint s0, Real tol, int max_iterations) {
  if (!(s0.sigma > 1)) fail(ErrorCode::LeftHalfPlane, "starting point has sigma <= 1");
  const Complex start = s0.value();
  Complex s = start;
  for (int it = 0; it <= max_iterations; ++it) {
    const Complex value = F(s);
    if (std::abs(value) <= tol) return {ComplexPoint::from(s), std::abs(value), Method::ArgumentPrincipleNewton, {}};
    if (it == max_iterations) break;
    const Complex h{kNewtonStep, 0};
    const Complex derivative = (F(s + h) - F(s - h)) / (2 * kNewtonStep);
    if (!(std::abs(derivative) > 0)) fail(ErrorCode::NoConvergence, "vanishing derivative");
    s -= value / derivative;
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) || std::abs(s - start) > kNewtonMaxDisplacement) {
      fail(ErrorCode::NoConvergence, "iterate left the search region");
    }
    if (!(s.real() > 1)) fail(ErrorCode::LeftHalfPlane, "iterate crossed sigma = 1");
  }
  fail(ErrorCode::NoConvergence, "no convergence in " + std::to_string(max_iterations) + " iterations");
}

RoucheCertificate rouche_certify(const Evaluator& F, const Evaluator& G, Circle circle, std::size_t samples,
                                 Real lipschitz_f, Real lipschitz_diff, Real eval_tol,
                                 const QuadratureParams& params) {
  if (samples < 8) fail(ErrorCode::InvalidArgument, "at least 8 circle samples are required");
  if (!(circle.radius > 0)) fail(ErrorCode::InvalidArgument, "circle radius must be positive");
  if (!(lipschitz_f >= 0) || !(lipschitz_diff >= 0) || !(eval_tol >= 0)) {
    fail(ErrorCode::InvalidArgument, "Lipschitz constants and tolerance must be nonnegative");
  }
  std::vector<Real> fmod(samples), diff(samples);
  parallel_for(samples, params.threads, [&](std::size_t k) {
    const Complex s = circle.centre + std::polar(circle.radius, 2 * kPi * static_cast<Real>(k) / samples);
    const Complex a = F(s);
    const Complex b = G(s);
    fmod[k] = std::abs(a);
    diff[k] = std::abs(b - a);
  });

  RoucheCertificate c;
  c.samples = samples;
  c.delta1 = circle.radius;
  c.lipschitz_f = lipschitz_f;
  c.lipschitz_diff = lipschitz_diff;
  c.eval_tol = eval_tol;
  c.spacing = kPi * circle.radius / static_cast<Real>(samples);
  c.sampled_min = *std::min_element(fmod.begin(), fmod.end());
  c.sampled_sup = *std::max_element(diff.begin(), diff.end());
  c.eps_min = c.sampled_min - lipschitz_f * c.spacing - eval_tol;
  c.sup_diff = c.sampled_sup + lipschitz_diff * c.spacing + 2 * eval_tol;
  c.margin = c.eps_min - c.sup_diff;
  if (!(c.eps_min > 0)) {
    fail(ErrorCode::FVanishesOnCircle, "F is not bounded away from zero on the circle (sampled min " +
                                           fmt(c.sampled_min) + ", certified " + fmt(c.eps_min) + ")");
  }

  auto safe_count = [&](const Evaluator& E) {
    try {
      return argument_count_detailed(E, circle, params).count;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ZeroOnBoundary || e.code() == ErrorCode::QuadratureStalled) return -1;
      throw;
    }
  };
  c.count_f = safe_count(F);
  c.count_g = safe_count(G);
  return c;
}

Real derivative_bound(const PeriodicFunction& f, Real alpha, Real sigma_min) {
  if (!(sigma_min > 1)) fail(ErrorCode::InvalidArgument, "derivative bound needs sigma_min > 1");
  const PeriodicFunction g = absolute(f);
  // -d/dsigma L(sigma, |f|, alpha) by a central difference, then the n = 0
  // term's sign is corrected when alpha < 1.
  const Real h = std::min<Real>(1e-4L, (sigma_min - 1) / 4);
  const Real tol = 1e-15L;
  const Real d = (lfunction_real(sigma_min - h, g, alpha, tol) - lfunction_real(sigma_min + h, g, alpha, tol)) / (2 * h);
  Real bound = d;
  if (alpha < 1) bound += 2 * g(0) * std::abs(std::log(alpha)) * std::pow(alpha, -sigma_min);
  // Difference error is O(h^2 L'''); a relative cushion covers it.
  return bound * (1 + 1e-3L) + 1e-12L;
}

RoucheCertificate rouche_check(const PeriodicFunction& f, const AlphaParam& alpha, const twist::TwistedSeries& F,
                               Real sigma0, Real delta1, Real t, std::size_t samples, const QuadratureParams& params,
                               Real region_tail) {
  if (!(delta1 > 0) || !(1 + delta1 < sigma0)) {
    fail(ErrorCode::InvalidArgument, "rouche_check needs 0 < delta1 and 1 + delta1 < sigma0");
  }
  const Real a = alpha.value();
  const Real lip = derivative_bound(f, a, sigma0 - delta1);
  Evaluator Fe = [&F](Complex s) { return F.evaluate(ComplexPoint::from(s), kRoucheEvalTol); };
  Evaluator Ge = [&f, &alpha, t](Complex s) {
    return lfunction(ComplexPoint{s.real(), s.imag() + t}, f, alpha, kRoucheEvalTol);
  };
  RoucheCertificate c = rouche_certify(Fe, Ge, Circle{Complex{sigma0, 0}, delta1}, samples, lip, 2 * lip,
                                       kRoucheEvalSlack, params);
  c.sigma0 = sigma0;
  c.t = t;
  c.region_tail = region_tail;
  c.sup_diff += region_tail;
  c.margin = c.eps_min - c.sup_diff;
  return c;
}

PipelineResult find_zero_pipeline(const PeriodicFunction& f, const AlphaParam& alpha, Real delta,
                                  const PipelineBudget& budget) {
  PipelineResult out;
  auto failed = [&](std::string stage, ErrorCode code, std::string message, std::map<std::string, Real> numbers = {}) {
    out.failure = StageFailure{std::move(stage), code, std::move(message), std::move(numbers)};
    return out;
  };
  const Real a = alpha.value();

  // residue
  const Real res = residue(f);
  out.stages.push_back({"residue", {{"residue", res}}});
  if (std::abs(res) <= 1e-15L * std::max<Real>(1, f.max_abs())) {
    return failed("residue", ErrorCode::ResidueZero, "residue of f is zero; L has no pole at s = 1");
  }

  // truncation
  std::optional<twist::TruncationResult> truncation;
  try {
    truncation = twist::truncation_index(f, alpha, delta);
  } catch (const Error& e) {
    return failed("truncation", e.code(), e.what());
  }
  const twist::TruncationResult& tr = *truncation;
  out.stages.push_back({"truncation",
                        {{"m", static_cast<Real>(tr.m)}, {"head", tr.head}, {"tail", tr.tail},
                         {"negated", tr.negated ? 1.0L : 0.0L}}});
  const PeriodicFunction& fn = tr.f;
  const twist::TwistedSeries F(fn, alpha, twist::SignFlip{tr.m});

  // sigma0
  twist::Sigma0Result s0;
  try {
    s0 = twist::find_sigma0(F, delta);
  } catch (const Error& e) {
    return failed("sigma0", e.code(), e.what());
  }
  const Real sigma0 = s0.sigma0;
  out.stages.push_back({"sigma0", {{"sigma0", sigma0}, {"residual", s0.residual}}});

  // circle
  Real delta1 = budget.delta1.value_or((sigma0 - 1) / 2);
  if (!(delta1 > 0) || !(1 + delta1 < sigma0)) {
    return failed("circle", ErrorCode::InvalidArgument, "delta1 must satisfy 0 < delta1 < sigma0 - 1",
                  {{"delta1", delta1}, {"sigma0", sigma0}});
  }
  Real eps_min = 0;
  Real lip = 0;
  for (int shrink = 0;; ++shrink) {
    lip = derivative_bound(fn, a, sigma0 - delta1);
    std::vector<Real> mods(budget.samples);
    parallel_for(budget.samples, budget.threads, [&](std::size_t k) {
      const Complex s = Complex{sigma0, 0} + std::polar(delta1, 2 * kPi * static_cast<Real>(k) / budget.samples);
      mods[k] = std::abs(F.evaluate(ComplexPoint::from(s), kRoucheEvalTol));
    });
    const Real spacing = kPi * delta1 / static_cast<Real>(budget.samples);
    eps_min = *std::min_element(mods.begin(), mods.end()) - lip * spacing - kRoucheEvalSlack;
    if (eps_min > 0) break;
    if (budget.delta1 || shrink >= 6) {
      return failed("circle", ErrorCode::FVanishesOnCircle, "F is not bounded away from zero on the circle",
                    {{"delta1", delta1}, {"eps_min", eps_min}});
    }
    delta1 /= 2;
  }
  out.stages.push_back({"circle", {{"delta1", delta1}, {"eps_min", eps_min}, {"lipschitz", lip}}});

  // plan
  const Real sigma_min = sigma0 - delta1;
  const Real theta = budget.theta.value_or((sigma_min - 1) / 2);
  if (!(theta > 0) || !(theta < sigma_min - 1)) {
    return failed("plan", ErrorCode::InvalidArgument, "theta must satisfy 0 < theta < sigma0 - delta1 - 1",
                  {{"theta", theta}});
  }
  const Real epsilon = budget.epsilon.value_or(eps_min);
  const std::size_t N = budget.kronecker_terms;
  if (N == 0 || N > 6) return failed("plan", ErrorCode::InvalidArgument, "Kronecker terms must be in 1..6");
  const PeriodicFunction g = absolute(fn);
  Real head_weight = 0;
  for (std::size_t n = 0; n < N; ++n) head_weight += g(static_cast<BigIndex>(n)) * std::pow(a + n, -sigma_min);
  const Real phase_delta =
      head_weight > 0 ? std::min<Real>(0.49L, epsilon / (4 * kPi * head_weight)) : 0.49L;
  const Real region_tail =
      budget.region_tail ? 2 * series_tail_real(1 + theta, g, a, static_cast<BigIndex>(N), 1e-15L) : 0;
  out.stages.push_back({"plan",
                        {{"N", static_cast<Real>(N)},
                         {"theta", theta},
                         {"epsilon", epsilon},
                         {"phase_delta", phase_delta},
                         {"region_tail", region_tail}}});

  // kronecker problem: (n + alpha)^{-it} close to the sign-flip weight
  kronecker::KroneckerProblem problem;
  problem.delta = phase_delta;
  for (std::size_t n = 0; n < N; ++n) {
    const Real target = static_cast<BigIndex>(n) <= tr.m ? 0 : 0.5L;
    const Real w = std::log(a + static_cast<Real>(n)) / (2 * kPi);
    if (std::abs(w) < 1e-15L) {
      if (target != 0) {
        return failed("kronecker", ErrorCode::DegenerateInput, "term with n + alpha = 1 cannot change sign");
      }
      continue;
    }
    problem.frequencies.push_back(w);
    problem.targets.push_back(target);
  }
  kronecker::SearchBudget kb;
  kb.max_t = budget.max_t;
  kb.max_iterations = budget.max_iterations;
  kb.strategy = kronecker::default_strategy(problem.frequencies.size());
  kb.threads = budget.threads == 0 ? resolve_threads(0) : budget.threads;

  Real t_floor = budget.t_min;
  std::optional<RoucheCertificate> last;
  for (int attempt = 0; attempt < std::max(1, budget.attempts); ++attempt) {
    problem.t_min = t_floor;
    kronecker::KroneckerSolution ks;
    try {
      ks = kronecker::solve(problem, kb);
    } catch (const Error& e) {
      std::map<std::string, Real> numbers{{"t_min", t_floor}, {"attempt", static_cast<Real>(attempt)}};
      if (last) numbers["last_margin"] = last->margin;
      return failed("kronecker", e.code(), e.what(), std::move(numbers));
    }
    out.stages.push_back({"kronecker",
                          {{"t", ks.t},
                           {"max_error", ks.max_error},
                           {"iterations", static_cast<Real>(ks.iterations)},
                           {"attempt", static_cast<Real>(attempt)}}});

    RoucheCertificate cert;
    QuadratureParams qp;
    qp.threads = budget.threads;
    try {
      cert = rouche_check(fn, alpha, F, sigma0, delta1, ks.t, budget.samples, qp, region_tail);
    } catch (const Error& e) {
      return failed("rouche", e.code(), e.what(), {{"t", ks.t}});
    }
    out.stages.push_back({"rouche",
                          {{"t", ks.t},
                           {"eps_min", cert.eps_min},
                           {"sup_diff", cert.sup_diff},
                           {"margin", cert.margin},
                           {"count_f", static_cast<Real>(cert.count_f)},
                           {"count_g", static_cast<Real>(cert.count_g)}}});
    last = cert;
    if (cert.valid() && cert.count_f >= 1) {
      // newton
      Evaluator L = [&fn, &alpha](Complex s) { return lfunction(ComplexPoint::from(s), fn, alpha, 1e-15L); };
      const Complex centre{sigma0, ks.t};
      try {
        ZeroRecord rec = newton_refine(L, ComplexPoint::from(centre), budget.newton_tol);
        if (std::abs(rec.s.value() - centre) >= delta1) {
          return failed("newton", ErrorCode::NoConvergence, "Newton converged outside the certified disk",
                        {{"sigma", rec.s.sigma}, {"t", rec.s.t}});
        }
        rec.method = Method::RouchePipeline;
        rec.certificate = cert;
        out.stages.push_back({"newton", {{"sigma", rec.s.sigma}, {"t", rec.s.t}, {"residual", rec.residual}}});
        out.record = rec;
        return out;
      } catch (const Error& e) {
        return failed("newton", e.code(), e.what(), {{"t", ks.t}});
      }
    }
    if (cert.margin > 0) {
      return failed("rouche", ErrorCode::NegativeMargin,
                    "positive margin contradicted by argument counts; certificate withheld",
                    {{"margin", cert.margin},
                     {"count_f", static_cast<Real>(cert.count_f)},
                     {"count_g", static_cast<Real>(cert.count_g)}});
    }
    t_floor = ks.t + 1;
  }
  return failed("rouche", ErrorCode::NegativeMargin, "no Kronecker solution gave a positive margin",
                {{"margin", last ? last->margin : 0}, {"attempts", static_cast<Real>(budget.attempts)}});
}

}  // namespace hurwitz::zeros
