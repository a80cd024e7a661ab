#include <benchmark/benchmark.h>

#include "dispbound/hyperbolic.hpp"

using namespace dispbound;

static void SchottkySampling(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_schottky(++seed).pairing_margin);
}
BENCHMARK(SchottkySampling);

static void BoundTest(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const SchottkyPair pair = sample_schottky(42);
  const H3Point z0{Complex{0.1, 0.2}, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(test_bound(pair, k, z0).margin);
}
BENCHMARK(BoundTest)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
