#include <benchmark/benchmark.h>

#include "rankreg/calibration.hpp"
#include "rankreg/estimator.hpp"
#include "rankreg/experiment.hpp"

namespace {

using namespace rankreg;

TrialInstance instance(int d, std::int64_t n) {
  TrialConfig c;
  c.d = d;
  c.n = n;
  c.m = n_log_n(n);
  c.lambda_min = 0.1;
  c.target_pe = 0.2;
  return build_trial_instance(c, 0);
}

void BM_EstimateCovariance(benchmark::State& state) {
  const TrialInstance inst = instance(static_cast<int>(state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_covariance(inst.samples));
}
BENCHMARK(BM_EstimateCovariance)->Args({10, 1000})->Args({10, 10000})->Args({100, 10000})->Unit(benchmark::kMicrosecond);

void BM_EstimateBeta(benchmark::State& state) {
  const TrialInstance inst = instance(static_cast<int>(state.range(0)), state.range(1));
  const CovarianceEstimate cov = estimate_covariance(inst.samples);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_beta(inst.comparisons, inst.samples, cov));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.comparisons.size()));
}
BENCHMARK(BM_EstimateBeta)->Args({10, 1000})->Args({10, 10000})->Args({100, 10000})->Unit(benchmark::kMicrosecond);

void BM_GenerateComparisons(benchmark::State& state) {
  const TrialInstance inst = instance(10, state.range(0));
  for (auto _ : state) {
    RngStream rng(1, 1);
    benchmark::DoNotOptimize(generate_comparisons(rng, inst.model, inst.samples, state.range(0) * 10));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_GenerateComparisons)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_EstimateC1(benchmark::State& state) {
  const LinkFunction link = LinkFunction::logistic(5.0);
  const ScoreDifferenceLaw law{2.0};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_c1(link, law));
}
BENCHMARK(BM_EstimateC1)->Unit(benchmark::kMicrosecond);

void BM_SolveAlpha(benchmark::State& state) {
  const ScoreDifferenceLaw law{7.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_alpha_for_pe(0.2, law));
}
BENCHMARK(BM_SolveAlpha)->Unit(benchmark::kMicrosecond);

void BM_RunTrial(benchmark::State& state) {
  TrialConfig c;
  c.d = 10;
  c.n = state.range(0);
  c.m = n_log_n(c.n);
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(c, 0));
}
BENCHMARK(BM_RunTrial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
