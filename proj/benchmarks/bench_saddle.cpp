#include <cmath>

#include <benchmark/benchmark.h>

#include "clusterkit/asymptotics.hpp"
#include "clusterkit/saddle.hpp"

namespace ck = clusterkit;

static void BM_SetSaddle(benchmark::State& state) {
  const auto w = ck::WeightSequence::power_law(1.5, 1.0);
  const double n = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ck::solve_set_saddle(w, n));
}
BENCHMARK(BM_SetSaddle)->Arg(100)->Arg(10'000)->Arg(1'000'000);

static void BM_MultisetSaddle(benchmark::State& state) {
  const auto w = ck::WeightSequence::partitions();
  const double n = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ck::solve_multiset_saddle(w, n));
}
BENCHMARK(BM_MultisetSaddle)->Arg(100)->Arg(10'000)->Arg(1'000'000);

static void BM_RatioSaddle(benchmark::State& state) {
  const auto w = ck::WeightSequence::partitions();
  const double n = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ck::solve_ratio_saddle(w, n, std::sqrt(n)));
}
BENCHMARK(BM_RatioSaddle)->Arg(100)->Arg(10'000);

static void BM_MultisetEstimate(benchmark::State& state) {
  const auto w = ck::WeightSequence::partitions();
  for (auto _ : state) benchmark::DoNotOptimize(ck::coeff_estimate_multiset(w, state.range(0), {}));
}
BENCHMARK(BM_MultisetEstimate)->Arg(1000)->Arg(100'000);
