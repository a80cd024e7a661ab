#include <benchmark/benchmark.h>

#include "dispbound/relations.hpp"

using namespace dispbound;

static void RelationCensusBench(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto census = enumerate_relations(2, k);
    benchmark::DoNotOptimize(census.total());
  }
}
BENCHMARK(RelationCensusBench)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void RelationVerification(benchmark::State& state) {
  const SphereIndexing indexing(2, 2);
  const auto census = enumerate_relations(2, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        verify_relation(indexing, census.relations[i % census.relations.size()], 4));
    ++i;
  }
}
BENCHMARK(RelationVerification);
