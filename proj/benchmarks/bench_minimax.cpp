#include <benchmark/benchmark.h>

#include "dispbound/minimax.hpp"

using namespace dispbound;

static void EvalMax(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto fam = build_family(2, k);
  const SimplexPoint u = SimplexPoint::uniform(fam.dim);
  for (auto _ : state) benchmark::DoNotOptimize(eval_G(fam, u).value);
}
BENCHMARK(EvalMax)->DenseRange(2, 4);

static void MinimizeSingleRestart(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto fam = build_family(2, k);
  SolverConfig cfg;
  cfg.restarts = 1;
  for (auto _ : state) {
    cfg.seed += 1;  // fresh start each round
    benchmark::DoNotOptimize(minimize(fam, FunctionTag::F, cfg).alpha_star);
  }
}
BENCHMARK(MinimizeSingleRestart)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
