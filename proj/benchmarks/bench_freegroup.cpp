#include <benchmark/benchmark.h>

#include "dispbound/freegroup.hpp"

using namespace dispbound;

static void SphereEnumeration(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SphereIndexing s(2, k);
    benchmark::DoNotOptimize(s.size());
  }
  state.SetComplexityN(sphere_size(2, k));
}
BENCHMARK(SphereEnumeration)->DenseRange(2, 8)->Complexity();

static void WordProducts(benchmark::State& state) {
  const auto ball = enumerate_ball_interior(2, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    const Word& a = ball[i % ball.size()];
    const Word& b = ball[(i * 7 + 3) % ball.size()];
    benchmark::DoNotOptimize(multiply(a, b));
    ++i;
  }
}
BENCHMARK(WordProducts);

static void IndexLookup(benchmark::State& state) {
  const SphereIndexing s(2, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.index_of(s.word_at(static_cast<int>(i % s.size()) + 1)));
    ++i;
  }
}
BENCHMARK(IndexLookup);
