#include <benchmark/benchmark.h>

#include <cmath>

#include "rtd/analysis.hpp"
#include "rtd/fit.hpp"
#include "rtd/instancegen.hpp"
#include "rtd/random.hpp"
#include "rtd/sls.hpp"

namespace {

const rtd::Formula& hard_instance() {
  static const rtd::Formula f = [] {
    return rtd::build_test_set(100, rtd::kDefaultClauseRatio, 1, 2024).instances.front();
  }();
  return f;
}

// Flips per second on an unsatisfiable-looking budget: every run is cut off
// at the same flip count, so items processed = flips.
void run_solver(benchmark::State& state, const rtd::SolverConfig& config) {
  const rtd::Formula& f = hard_instance();
  const auto cutoff = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  std::uint64_t flips = 0;
  for (auto _ : state) {
    const rtd::RunRecord r = rtd::run(f, config, cutoff, seed++);
    flips += r.flips;
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(flips));
}

void BM_Gsat(benchmark::State& state) { run_solver(state, rtd::SolverConfig::gsat()); }
void BM_Gwsat(benchmark::State& state) { run_solver(state, rtd::SolverConfig::gwsat(0.5)); }
void BM_Wsat(benchmark::State& state) { run_solver(state, rtd::SolverConfig::wsat(0.55)); }
BENCHMARK(BM_Gsat)->Arg(10000);
BENCHMARK(BM_Gwsat)->Arg(10000);
BENCHMARK(BM_Wsat)->Arg(10000);

void BM_Dpll(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto m = static_cast<std::uint32_t>(std::lround(rtd::kDefaultClauseRatio * n));
  std::uint64_t i = 0;
  for (auto _ : state) {
    state.PauseTiming();
    const rtd::Formula f = rtd::generate_random_3sat(n, m, rtd::derive_seed(1, i++));
    state.ResumeTiming();
    benchmark::DoNotOptimize(rtd::dpll_sat(f, i));
  }
}
BENCHMARK(BM_Dpll)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FitWeibull(benchmark::State& state) {
  const rtd::Rld rld =
      rtd::sample_model(rtd::ModelCdf::weibull(100, 0.7), static_cast<std::uint64_t>(state.range(0)), 1000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(rtd::fit_weibull(rld));
}
BENCHMARK(BM_FitWeibull)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_EmpiricalCdf(benchmark::State& state) {
  const rtd::Rld rld = rtd::sample_model(rtd::ModelCdf::exponential(1000), 10000, 100000, 4);
  rtd::Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(rld.cdf(static_cast<double>(rng.below(100000))));
}
BENCHMARK(BM_EmpiricalCdf);

void BM_ExpectedTimeCutoff(benchmark::State& state) {
  const rtd::CdfSource src = rtd::CdfSource::function("mixture", [](double t) {
    return 0.5 * (rtd::ModelCdf::exponential(100).cdf(t) + rtd::ModelCdf::exponential(10000).cdf(t));
  });
  for (auto _ : state) {
    benchmark::DoNotOptimize(rtd::optimal_cutoff_expected_time(src, rtd::SearchGrid{.t_max = 20000}));
  }
}
BENCHMARK(BM_ExpectedTimeCutoff)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
