#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <hurwitz/annulus.hpp>
#include <hurwitz/errors.hpp>
#include <hurwitz/eval.hpp>
#include <hurwitz/ideals.hpp>
#include <hurwitz/io.hpp>
#include <hurwitz/kronecker.hpp>
#include <hurwitz/twist.hpp>
#include <hurwitz/zeros.hpp>

#include "oracles.hpp"

using namespace hurwitz;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. lfunction against decompose on random inputs.
Outcome decomposition_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> qd(1, 8);
  Real worst = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Real> f(static_cast<std::size_t>(qd(gen)));
    for (auto& x : f) x = 4 * u(gen) - 2;
    const Real a = 0.01L + 4.98L * u(gen);
    const ComplexPoint s{1.1L + 1.9L * u(gen), 100 * u(gen) - 50};
    const PeriodicFunction pf(f);
    worst = std::max(worst, std::abs(lfunction(s, pf, a) - decompose(s, pf, a)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10L && secs < 30, fmt("max |lfunction - decompose| = %.3Le over 200 draws, %.2f s", worst, secs)};
}

// 2. zeta(s, 1/2) = (2^s - 1) zeta(s) on a 10 x 10 grid.
Outcome half_identity() {
  Real worst = 0;
  const auto half = AlphaParam::rational(1, 2);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const ComplexPoint s{1.1L + 0.2L * i, -50 + Real(100) * j / 9};
      const Complex lhs = hurwitz_zeta(s, half);
      const Complex rhs = (std::pow(Complex(2), s.value()) - Complex(1)) * hurwitz_zeta(s, 1.0L);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {worst <= 1e-10L, fmt("max deviation %.3Le on 100 grid points", worst)};
}

// 3. (s - 1) L(s) -> residue(f) as s -> 1+.
Outcome residue_convergence() {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> qd(1, 8);
  Real worst_ratio = 0;
  int draws = 0;
  while (draws < 50) {
    std::vector<Real> f(static_cast<std::size_t>(qd(gen)));
    for (auto& x : f) x = 2 * u(gen) - 1;
    const PeriodicFunction pf(f);
    if (std::abs(residue(pf)) < 0.05L) continue;
    ++draws;
    const Real a = 0.5L + 2.5L * u(gen);
    for (int k = 2; k <= 6; ++k) {
      const Real h = std::pow(10.0L, -k);
      const Real value = (h * lfunction({1 + h, 0}, pf, a, 1e-12L / h)).real();
      worst_ratio = std::max(worst_ratio, std::abs(value - residue(pf)) / (10 * h));
    }
  }
  return {worst_ratio <= 1, fmt("worst |(s-1)L - residue| / (10 * 10^-k) = %.3Lf over 50 f, k = 2..6", worst_ratio)};
}

// 4. Kronecker solutions re-verify; N = 1 matches the closed form.
Outcome kronecker_soundness() {
  std::mt19937_64 gen(404);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> nd(1, 4);
  kronecker::SearchBudget budget;
  budget.max_t = 1e8L;
  int solved = 0, exhausted = 0, bad = 0, closed_checked = 0;
  Real worst = 0, closed_worst = 0;
  for (int i = 0; i < 100; ++i) {
    kronecker::KroneckerProblem p;
    p.delta = 0.05L;
    p.t_min = 10 * u(gen);
    const int n = nd(gen);
    for (int k = 0; k < n; ++k) {
      p.frequencies.push_back(std::log(k + 1 + 5 * u(gen)) / kTwoPi + 0.05L);
      p.targets.push_back(u(gen));
    }
    try {
      const auto sol = kronecker::solve(p, budget);
      ++solved;
      Real err = 0;
      for (int k = 0; k < n; ++k) err = std::max(err, oracle::circle_distance(sol.t * p.frequencies[k] - p.targets[k]));
      worst = std::max(worst, err);
      if (!(err < p.delta) || !(sol.t > p.t_min)) ++bad;
      if (n == 1) {
        const Real w = p.frequencies[0], b = p.targets[0];
        Real k = std::floor(p.t_min * w - b) + 1;
        if ((b + k - 1) / w > p.t_min) k -= 1;
        closed_worst = std::max(closed_worst, std::abs(sol.t - (b + k) / w));
        ++closed_checked;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExhausted) ++bad;
      ++exhausted;
    }
  }
  return {bad == 0 && closed_worst <= 1e-9L && closed_checked > 0,
          fmt("%d solved, %d budget-exhausted, %d unsound; max replay error %.4Lf; N = 1 closed form max diff %.2Le (%d cases)",
              solved, exhausted, bad, worst, closed_worst, closed_checked)};
}

// 5. Annulus radii, Monte Carlo containment and realization.
Outcome annulus_properties() {
  std::mt19937_64 gen(505);
  std::uniform_real_distribution<double> u(0.001, 10);
  std::uniform_int_distribution<int> nd(1, 12);
  int closed_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<Real> r(static_cast<std::size_t>(nd(gen)));
    Real sum = 0, mx = 0;
    for (auto& x : r) {
      x = u(gen);
      sum += x;
      mx = std::max(mx, x);
    }
    const auto rr = annulus::radii(r);
    if (std::abs(rr.inner - std::max<Real>(0, 2 * mx - sum)) > 1e-12L * sum || std::abs(rr.outer - sum) > 1e-12L * sum)
      ++closed_bad;
  }
  int mc_bad = 0;
  Real realize_worst = 0;
  for (int i = 0; i < 10; ++i) {
    std::vector<Real> r(static_cast<std::size_t>(1 + i % 6));
    for (auto& x : r) x = u(gen);
    const auto rr = annulus::radii(r);
    const auto [lo, hi] = oracle::annulus_monte_carlo(r, 100000, 900 + i);
    if (lo < rr.inner - 1e-12L || hi > rr.outer + 1e-12L) ++mc_bad;
    const annulus::AnnulusSpec spec(r);
    for (int a = 0; a < 20; ++a) {
      const Real rho = rr.inner + (rr.outer - rr.inner) * a / 19;
      for (int b = 0; b < 20; ++b) {
        const Complex z = std::polar(rho, kTwoPi * b / 20);
        realize_worst = std::max(realize_worst, std::abs(annulus::evaluate(r, annulus::realize(spec, z)) - z));
      }
    }
  }
  return {closed_bad == 0 && mc_bad == 0 && realize_worst <= 1e-9L,
          fmt("closed form mismatches %d/10000; Monte Carlo excursions %d/10; realize max error %.2Le on 10 x 400 targets",
              closed_bad, mc_bad, realize_worst)};
}

// 6. |Lambda + z| = max(0, |Lambda| - S3).
Outcome z_rule() {
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> u(0, 1);
  Real worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const Complex lambda = i % 50 == 0 ? Complex(0) : std::polar(Real(10 * u(gen)), Real(kTwoPi * u(gen)));
    const Real s3 = 0.001L + 10 * u(gen);
    const Complex z = twist::choose_correction(lambda, s3);
    worst = std::max(worst, std::abs(std::abs(lambda + z) - std::max<Real>(0, std::abs(lambda) - s3)));
  }
  return {worst <= 1e-12L, fmt("max deviation %.2Le over 10^4 draws", worst)};
}

// 7. Authentic greedy induction for f = 1, alpha = sqrt 2.
Outcome greedy_induction() {
  const auto t0 = std::chrono::steady_clock::now();
  twist::BlockSchedule schedule;
  schedule.N1 = 1000;
  schedule.blocks = 50;
  twist::ScheduleOptions options;
  options.mode = twist::SetMode::Authentic;
  options.threads = 0;
  twist::InductionReport report;
  try {
    report = twist::run_schedule(PeriodicFunction({1}), AlphaParam::quadratic(0, 1, 2), schedule, options);
  } catch (const Error& e) {
    return {false, std::string("schedule threw ") + e.what()};
  }
  if (report.failure) {
    std::string ledger;
    if (!report.blocks.empty()) ledger = io::json(report.blocks.back()).dump();
    return {false, "halted at block " + std::to_string(report.failure->block) + ": " + report.failure->message +
                       (ledger.empty() ? "" : " ledger " + ledger)};
  }
  int ratio_ok = 0;
  for (const auto& b : report.blocks) {
    const auto& h = b.high;
    const bool induction = h.S1 < 0.01L * (h.S2 + h.S3 + h.S4);
    const bool contraction = h.next_abs <= std::max<Real>(0, h.S1 + h.S2 - h.S3) + 1e-12L * h.S4;
    if (!(h.eqalg && h.chain && induction && contraction)) {
      return {false, "block " + std::to_string(b.j) + " violates an induction inequality; ledger " + io::json(b).dump()};
    }
    ratio_ok += h.ratio ? 1 : 0;
  }
  const bool enough = report.blocks.size() >= 50;
  return {enough, fmt("%zu blocks to N = %lld at sigma = %.6Lf, eqalg/chain/induction/contraction hold at high precision on all; "
                      "S3/S2 > 101/99 on %d blocks (reported); %.1f s",
                      report.blocks.size(), static_cast<long long>(report.blocks.back().N_next), report.sigma, ratio_ok,
                      seconds_since(t0))};
}

// 8. Norm recombination and private primes against brute force.
Outcome ideal_arithmetic() {
  const auto alpha = AlphaParam::quadratic(0, 1, 2);
  const auto field = ideals::field_of(alpha);
  int norm_bad = 0;
  for (std::int64_t n = 0; n <= 5000; ++n) {
    const auto fac = ideals::factor_shift(n, alpha, field);
    BigInt product = 1;
    for (const auto& [P, e] : fac.factors)
      for (int i = 0; i < e; ++i) product *= P.norm();
    const BigInt expected = n * n >= 2 ? BigInt(n * n - 2) : BigInt(2 - n * n);
    if (product != fac.norm || fac.norm != expected) ++norm_bad;
  }

  // For each prime of each n <= 2000, the nearest other m <= 2000 it divides,
  // by pairwise membership tests.
  constexpr std::int64_t kLimit = 2000;
  std::vector<std::int64_t> private_until(kLimit + 1, -1);  // n is private in [0, L] iff L <= private_until[n]
  for (std::int64_t n = 1; n <= kLimit; ++n) {
    for (const auto& [P, e] : oracle::factor_shift_sqrt(n, 2)) {
      std::int64_t first_other = kLimit + 1;
      bool below = false;
      for (std::int64_t m = 0; m <= kLimit; ++m) {
        if (m == n || !oracle::in_prime(P, BigInt(m), BigInt(1))) continue;
        if (m < n) {
          below = true;
          break;
        }
        first_other = m;
        break;
      }
      if (!below) private_until[n] = std::max(private_until[n], first_other - 1);
    }
  }
  std::mt19937_64 gen(808);
  ideals::ShiftFactorTable table(alpha, 0);
  int blocks = 0, block_bad = 0;
  for (std::int64_t L = 1; L <= kLimit; ++L) {
    table.extend_to(L);
    std::vector<std::int64_t> starts{0, L - 1};
    std::uniform_int_distribution<std::int64_t> nd(0, L - 1);
    for (int k = 0; k < 3; ++k) starts.push_back(nd(gen));
    for (std::int64_t N : starts) {
      std::vector<std::int64_t> expected;
      for (std::int64_t n = N + 1; n <= L; ++n)
        if (L <= private_until[n]) expected.push_back(n);
      ++blocks;
      if (ideals::private_primes(N, L - N, table).private_n != expected) ++block_bad;
    }
  }
  return {norm_bad == 0 && block_bad == 0,
          fmt("norm mismatches %d for n <= 5000; private-prime mismatches %d over %d blocks with N + M <= 2000", norm_bad,
              block_bad, blocks)};
}

// 9. Argument-principle counts.
Outcome argument_principle() {
  const auto t0 = std::chrono::steady_clock::now();
  const zeros::Evaluator synthetic = [](Complex s) {
    return Complex(1) - std::exp((Complex(1.05L) - s) * std::log(2.0L));
  };
  const zeros::Evaluator zeta = [](Complex s) { return hurwitz_zeta(ComplexPoint::from(s), 1.0L); };
  int a = -1, b = -1;
  try {
    a = zeros::argument_count(synthetic, {1.01L, 1.1L, -1, 20});
    b = zeros::argument_count(zeta, {1.1L, 2, 0, 30});
  } catch (const Error& e) {
    return {false, std::string("count threw ") + e.what()};
  }
  const double secs = seconds_since(t0);
  return {a == 3 && b == 0 && secs < 60, fmt("synthetic count %d (expect 3), zeta count %d (expect 0), %.2f s", a, b, secs)};
}

// 10. Rouche margin agrees with independent argument counts.
Outcome rouche_cross_validation() {
  std::mt19937_64 gen(1010);
  std::uniform_real_distribution<double> u(0, 1);
  int positive = 0, negative = 0, disagreements = 0, false_certificates = 0;
  for (int i = 0; i < 50; ++i) {
    const Complex a{1.3L + 0.5L * u(gen), 40 * u(gen)};
    const Complex b = a + std::polar(Real(1 + 2 * u(gen)), Real(kTwoPi * u(gen)));
    const Real r = 0.05L + 0.2L * u(gen);
    const zeros::Evaluator F = [=](Complex s) { return (s - a) * (s - b); };
    Real fmin = INFINITY, fmax = 0;
    for (int k = 0; k < 4096; ++k) {
      const Real m = std::abs(F(a + std::polar(r, kTwoPi * k / 4096)));
      fmin = std::min(fmin, m);
      fmax = std::max(fmax, m);
    }
    // Perturbations well inside or well outside the ambiguous band.
    const Real size = i % 2 == 0 ? fmin * (0.05L + 0.6L * u(gen)) : fmax * (1.3L + u(gen));
    const Complex c = std::polar(size, Real(kTwoPi * u(gen)));
    const zeros::Evaluator G = [=](Complex s) { return F(s) + c; };
    const Real lip = std::abs(a - b) + 2 * r;
    zeros::QuadratureParams qp;
    qp.threads = 1;
    const auto cert = zeros::rouche_certify(F, G, {a, r}, 1440, lip, 0, 1e-15L, qp);
    const int nf = zeros::argument_count_detailed(F, zeros::Circle{a, r}, qp).count;
    const int ng = zeros::argument_count_detailed(G, zeros::Circle{a, r}, qp).count;
    const bool agree = nf == ng;
    (cert.margin > 0 ? positive : negative) += 1;
    if ((cert.margin > 0) != agree) ++disagreements;
    if (cert.valid() && !agree) ++false_certificates;
  }
  return {disagreements == 0 && false_certificates == 0 && positive > 0 && negative > 0,
          fmt("%d positive / %d negative margins; %d margin-vs-count disagreements; %d false certificates", positive,
              negative, disagreements, false_certificates)};
}

// 11. End-to-end pipeline at reduced parameters.
Outcome pipeline_smoke() {
  const auto t0 = std::chrono::steady_clock::now();
  zeros::PipelineBudget budget;
  budget.kronecker_terms = 4;
  budget.max_t = 2e4L;
  budget.attempts = 2;
  zeros::PipelineResult result;
  try {
    result = zeros::find_zero_pipeline(PeriodicFunction({1}), AlphaParam::decimal("0.7853981634"), 0.5L, budget);
  } catch (const std::exception& e) {
    return {false, std::string("pipeline threw ") + e.what()};
  }
  const double secs = seconds_since(t0);
  if (result.record.has_value() == result.failure.has_value()) return {false, "neither exactly one record nor one failure"};
  if (result.record) {
    const auto& rec = *result.record;
    const bool ok = rec.certificate && rec.certificate->margin > 0 && rec.certificate->valid() &&
                    rec.residual <= budget.newton_tol * 10;
    return {ok, fmt("record at %.12Lf%+.12Lfi, residual %.2Le, margin %.3Le, %.1f s", rec.s.sigma, rec.s.t, rec.residual,
                    rec.certificate ? rec.certificate->margin : Real(0), secs)};
  }
  const auto& f = *result.failure;
  std::ostringstream numbers;
  for (const auto& [k, v] : f.numbers) numbers << " " << k << "=" << static_cast<double>(v);
  return {!f.stage.empty(), "structured failure at stage " + f.stage + " (" + std::string(to_string(f.code)) + ")" +
                                numbers.str() + fmt(", %zu stages reported, %.1f s", result.stages.size(), secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"decomposition identity", decomposition_identity},
      {"half identity", half_identity},
      {"residue convergence", residue_convergence},
      {"kronecker soundness", kronecker_soundness},
      {"annulus", annulus_properties},
      {"z-rule identity", z_rule},
      {"greedy induction", greedy_induction},
      {"ideal arithmetic", ideal_arithmetic},
      {"argument principle", argument_principle},
      {"rouche cross-validation", rouche_cross_validation},
      {"pipeline smoke test", pipeline_smoke},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("uncaught exception: ") + e.what()};
    }
    std::printf("criterion %2zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
