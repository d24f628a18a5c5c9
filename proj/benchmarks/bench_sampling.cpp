#include <benchmark/benchmark.h>

#include "clusterkit/sampling.hpp"

namespace ck = clusterkit;

static void BM_BoltzmannSet(benchmark::State& state) {
  ck::SamplerConfig cfg;
  cfg.model = ck::Model::kSet;
  cfg.n = state.range(0);
  ck::BoltzmannSampler s(ck::WeightSequence::partitions(), cfg);
  auto rng = ck::RandomStream::split(7, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(rng));
}
BENCHMARK(BM_BoltzmannSet)->Arg(100)->Arg(500);

static void BM_BoltzmannMultiset(benchmark::State& state) {
  ck::SamplerConfig cfg;
  cfg.model = ck::Model::kMultiset;
  cfg.n = state.range(0);
  ck::BoltzmannSampler s(ck::WeightSequence::partitions(), cfg);
  auto rng = ck::RandomStream::split(7, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(rng));
}
BENCHMARK(BM_BoltzmannMultiset)->Arg(100)->Arg(500);

static void BM_ExactDp(benchmark::State& state) {
  ck::ExactDpSampler s(ck::WeightSequence::partitions(), state.range(0), ck::Model::kSet);
  auto rng = ck::RandomStream::split(7, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(rng));
}
BENCHMARK(BM_ExactDp)->Arg(100)->Arg(500)->Arg(2000);
