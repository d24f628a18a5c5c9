#include <benchmark/benchmark.h>

#include "clusterkit/series.hpp"

namespace ck = clusterkit;

static void BM_SeriesExp(benchmark::State& state) {
  const auto C = ck::truncate_C(ck::WeightSequence::partitions(), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ck::series_exp(C));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SeriesExp)->RangeMultiplier(2)->Range(250, 4000)->Complexity(benchmark::oNSquared);

static void BM_EulerTransform(benchmark::State& state) {
  const auto w = ck::WeightSequence::partitions();
  for (auto _ : state) benchmark::DoNotOptimize(ck::euler_transform(w, state.range(0)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EulerTransform)->RangeMultiplier(2)->Range(250, 4000)->Complexity();

static void BM_MaxSizeTable(benchmark::State& state) {
  const auto w = ck::WeightSequence::partitions();
  const auto model = state.range(1) ? ck::Model::kMultiset : ck::Model::kSet;
  for (auto _ : state) benchmark::DoNotOptimize(ck::MaxSizeTable(w, state.range(0), model));
}
BENCHMARK(BM_MaxSizeTable)->ArgsProduct({{100, 400, 1000}, {0, 1}});

static void BM_BivariateSet(benchmark::State& state) {
  const auto w = ck::WeightSequence::partitions();
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(ck::bivariate_set_coeffs(w, n, n));
}
BENCHMARK(BM_BivariateSet)->Arg(100)->Arg(400);
