// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <string>

#include "womc/kernels.hpp"
#include "womc/prescription.hpp"
#include "womc/solver.hpp"

using namespace womc;

namespace {

struct Setup {
  LoadedScenario l;
  DelayMatrix d;
  std::vector<World> worlds;
  Policy g;
  explicit Setup(const char* name)
      : l(load_scenario_file(std::string(WOMC_FIXTURES) + "/" + name)),
        d(min_delay_matrix(l.topology)),
        worlds(enumerate_worlds(l.scenario, 10'000'000)),
        g(random_policy(l.scenario, d, 1)) {}
};

const Setup& fixture() {
  static const Setup s("instance_a_prime.wom");
  return s;
}

void BM_PropagateSerial(benchmark::State& state) {
  const Setup& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(propagate_all_serial(f.l.scenario, f.worlds, f.g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.worlds.size()));
}

void BM_PropagateParallel(benchmark::State& state) {
  const Setup& f = fixture();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_all(f.l.scenario, f.worlds, f.g, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.worlds.size()));
}

void BM_CostSerial(benchmark::State& state) {
  const Setup& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(expected_total_cost_serial(f.l.scenario, f.worlds, f.g));
}

void BM_CostParallel(benchmark::State& state) {
  const Setup& f = fixture();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(expected_total_cost(f.l.scenario, f.worlds, f.g, jobs));
}

void BM_BruteForce(benchmark::State& state) {
  static const LoadedScenario b = load_scenario_file(std::string(WOMC_FIXTURES) + "/instance_b.wom");
  const DelayMatrix d = min_delay_matrix(b.topology);
  Limits limits;
  limits.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimal(b.scenario, d, limits).value);
}

}  // namespace

BENCHMARK(BM_PropagateSerial);
BENCHMARK(BM_PropagateParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();
BENCHMARK(BM_CostSerial);
BENCHMARK(BM_CostParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(1)->UseRealTime();

BENCHMARK_MAIN();
