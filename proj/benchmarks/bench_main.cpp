#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include <hurwitz/annulus.hpp>
#include <hurwitz/eval.hpp>
#include <hurwitz/ideals.hpp>
#include <hurwitz/kronecker.hpp>
#include <hurwitz/twist.hpp>
#include <hurwitz/zeros.hpp>

using namespace hurwitz;

namespace {

void BM_HurwitzZeta(benchmark::State& state) {
  const ComplexPoint s{1.5L, static_cast<Real>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(hurwitz_zeta(s, 0.3L));
}
BENCHMARK(BM_HurwitzZeta)->Arg(0)->Arg(100)->Arg(10000);

void BM_LFunction(benchmark::State& state) {
  const PeriodicFunction f({1, -2, 0.5L, 1, 3, -1, 0.25L, 2});
  const ComplexPoint s{1.2L, 40};
  for (auto _ : state) benchmark::DoNotOptimize(lfunction(s, f, 0.7L));
}
BENCHMARK(BM_LFunction);

void BM_HighPrecisionZeta(benchmark::State& state) {
  const unsigned digits = static_cast<unsigned>(state.range(0));
  const ScopedDigits scope(digits);
  const HighReal s("1.25"), a("0.5"), tol = pow(HighReal(10), -static_cast<int>(digits) + 10);
  for (auto _ : state) benchmark::DoNotOptimize(hurwitz_zeta_real(s, a, tol));
}
BENCHMARK(BM_HighPrecisionZeta)->Arg(30)->Arg(50);

void BM_KroneckerGrid(benchmark::State& state) {
  kronecker::KroneckerProblem p;
  p.delta = 0.05L;
  for (int n = 0; n < state.range(0); ++n) {
    p.frequencies.push_back(std::log(n + kPi) / kTwoPi);
    p.targets.push_back(0.37L * (n + 1));
  }
  kronecker::SearchBudget b;
  b.max_t = 1e9L;
  for (auto _ : state) benchmark::DoNotOptimize(kronecker::solve(p, b));
}
BENCHMARK(BM_KroneckerGrid)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_AnnulusRealize(benchmark::State& state) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<Real> r(static_cast<std::size_t>(state.range(0)));
  for (auto& x : r) x = u(gen);
  const annulus::AnnulusSpec spec(r);
  const Complex z{0.3L, -0.2L};
  for (auto _ : state) benchmark::DoNotOptimize(annulus::realize(spec, z));
}
BENCHMARK(BM_AnnulusRealize)->Arg(8)->Arg(64)->Arg(512);

void BM_FactorTable(benchmark::State& state) {
  const auto alpha = AlphaParam::quadratic(0, 1, 2);
  for (auto _ : state) {
    ideals::ShiftFactorTable table(alpha, 1);
    table.extend_to(state.range(0));
    benchmark::DoNotOptimize(table.limit());
  }
}
BENCHMARK(BM_FactorTable)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_GreedySchedule(benchmark::State& state) {
  twist::BlockSchedule schedule;
  schedule.N1 = 1000;
  schedule.blocks = static_cast<std::size_t>(state.range(0));
  twist::ScheduleOptions options;
  for (auto _ : state)
    benchmark::DoNotOptimize(twist::run_schedule(PeriodicFunction({1}), AlphaParam::quadratic(0, 1, 2), schedule, options));
}
BENCHMARK(BM_GreedySchedule)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ArgumentCount(benchmark::State& state) {
  const zeros::Evaluator zeta = [](Complex s) { return hurwitz_zeta(ComplexPoint::from(s), 1.0L); };
  zeros::QuadratureParams params;
  params.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(zeros::argument_count(zeta, {1.1L, 2, 0, 30}, params));
}
BENCHMARK(BM_ArgumentCount)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
