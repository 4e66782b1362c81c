// Serial reference vs OpenMP replication kernel.

#include <benchmark/benchmark.h>

#include "aor/optimizer.hpp"
#include "aor/simulator.hpp"

namespace {

aor::sim::SimulationConfig bench_config(std::int64_t reps) {
  aor::sim::SimulationConfig c;
  c.params = {{0.25, 0.8, 0.8}, 0.5};
  c.n_slots = 500'000;
  c.warmup_slots = 1'000;
  c.n_replications = reps;
  return c;
}

void BM_RunSerial(benchmark::State& state) {
  const auto config = bench_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aor::sim::run_serial(config).avg_aoi);
  state.SetItemsProcessed(state.iterations() * config.n_slots * config.n_replications);
}

void BM_RunParallel(benchmark::State& state) {
  const auto config = bench_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(aor::sim::run(config).avg_aoi);
  state.SetItemsProcessed(state.iterations() * config.n_slots * config.n_replications);
}

void BM_NumericalOptimum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(aor::optimizer::numerical_optimal_p({0.25, 0.8, 0.8}).p_star);
}

void BM_ClosedFormOptimum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(aor::optimizer::optimal_p({0.25, 0.8, 0.8}).p_star);
}

}  // namespace

BENCHMARK(BM_RunSerial)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunParallel)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NumericalOptimum)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ClosedFormOptimum);

BENCHMARK_MAIN();
