// Serial reference vs OpenMP for the parallel kernels.
#include "gatehold/calibration.hpp"
#include "gatehold/experiments.hpp"
#include "gatehold/overlap.hpp"
#include "gatehold/random.hpp"
#include "gatehold/simulation.hpp"
#include "gatehold/tabu.hpp"

#include <benchmark/benchmark.h>

using namespace gatehold;

namespace {

struct Fixture {
  Schedule turns;
  GateMap current;
  SimConfig sim;
  DelayDistributions delays;
  std::vector<double> window_counts;

  Fixture() {
    const auto profile = lga_profile();
    const auto legs = gen_synthetic(profile.generator, 7);
    turns = pair_schedule(legs);
    for (const auto& f : turns.flights) current[f.id] = *f.current_gate;
    sim = sim_config(profile, 7);
    delays = delays_from_schedule(legs);
    window_counts = window_count_distribution(kLgaTakeoffParams);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_ReplicationsSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(run_replicated_serial(f.turns, f.current, f.sim));
}

void BM_ReplicationsParallel(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(run_replicated(f.turns, f.current, f.sim));
}

void BM_TakeoffGridSerial(benchmark::State& st) {
  const auto& f = fixture();
  TakeoffFitOptions o;
  o.c_max = 1.5;
  for (auto _ : st) benchmark::DoNotOptimize(fit_takeoff_params_serial(0.5917, 0.1234, f.window_counts, o));
}

void BM_TakeoffGridParallel(benchmark::State& st) {
  const auto& f = fixture();
  TakeoffFitOptions o;
  o.c_max = 1.5;
  for (auto _ : st) benchmark::DoNotOptimize(fit_takeoff_params(0.5917, 0.1234, f.window_counts, o));
}

void BM_OverlapTableSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(overlap_table_serial(f.delays));
}

void BM_OverlapTableParallel(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(overlap_table(f.delays));
}

void tabu_bench(benchmark::State& st, bool parallel) {
  const auto& f = fixture();
  const auto inst = ProblemInstance::from_schedule(f.turns, 0, 8.0, 0.97);
  const auto start = initial_assignment(inst, from_gate_map(inst, f.current));
  TabuOptions o;
  o.budget = 100;
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel ? tabu_search_restarts(inst, start, o, seeds)
                                      : tabu_search_restarts_serial(inst, start, o, seeds));
}

void BM_TabuRestartsSerial(benchmark::State& st) { tabu_bench(st, false); }
void BM_TabuRestartsParallel(benchmark::State& st) { tabu_bench(st, true); }

}  // namespace

BENCHMARK(BM_ReplicationsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReplicationsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TakeoffGridSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TakeoffGridParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OverlapTableSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OverlapTableParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TabuRestartsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TabuRestartsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
