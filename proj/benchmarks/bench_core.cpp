// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "mimostats/capacity_optimizer.hpp"
#include "mimostats/monte_carlo.hpp"
#include "mimostats/replica_solver.hpp"

namespace {

mimostats::ChannelSpec baseline(int n, double k_db, double alpha, double snr_db) {
  mimostats::ChannelSpec spec;
  spec.n_t = spec.n_r = n;
  spec.h_bar = mimostats::uniform_los(n, n);
  spec.t_corr = mimostats::exponential_correlation(n, alpha);
  spec.r_corr = mimostats::exponential_correlation(n, alpha);
  spec.snr_db = snr_db;
  spec.rice_k_db = k_db;
  return mimostats::normalize_spec(spec);
}

void SolveFixedPoint(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = baseline(n, 10.0, 0.5, 10.0);
  const auto eff = mimostats::effective_channel(spec, mimostats::scalar_covariance(spec));
  for (auto _ : state) {
    auto fp = mimostats::solve_fixed_point(eff);
    benchmark::DoNotOptimize(fp);
  }
}
BENCHMARK(SolveFixedPoint)->Arg(4)->Arg(16)->Arg(64)->Arg(128);

void AsymptoticStats(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = baseline(n, 10.0, 0.5, 10.0);
  const auto eff = mimostats::effective_channel(spec, mimostats::scalar_covariance(spec));
  const auto fp = mimostats::solve_fixed_point(eff);
  for (auto _ : state) {
    auto st = mimostats::asymptotic_stats(eff, fp);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(AsymptoticStats)->Arg(4)->Arg(16)->Arg(64);

void MonteCarloTrials(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = baseline(n, 10.0, 0.0, 10.0);
  const auto q = mimostats::scalar_covariance(spec);
  mimostats::McConfig cfg;
  cfg.trials = 2000;
  cfg.master_seed = 42;
  for (auto _ : state) {
    auto est = mimostats::estimate(spec, q, cfg, {}, 1);
    benchmark::DoNotOptimize(est);
  }
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(MonteCarloTrials)->Arg(2)->Arg(4)->Arg(8);

void WaterfillingOptimize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = baseline(n, 10.0, 0.0, 0.0);
  for (auto _ : state) {
    auto sol = mimostats::optimize_uncorrelated(spec);
    benchmark::DoNotOptimize(sol);
  }
}
BENCHMARK(WaterfillingOptimize)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
