// Benchmarks for a single IMEX step across kernel families and grid sizes:
// the marginal cost of the non-local term relative to the local scheme.

#include <benchmark/benchmark.h>

#include <cmath>

#include "nlkpp/kernel.hpp"
#include "nlkpp/solver.hpp"

namespace {

nlkpp::SimConfig config_for(int n) {
  nlkpp::SimConfig cfg;
  cfg.dx = 0.05;
  cfg.dt_max = 0.02;
  cfg.t_end = 1.0;
  // Wide margin so the benchmark loop never triggers a domain extension.
  cfg.extension_chunk = 0.25 * n * cfg.dx;
  return cfg;
}

nlkpp::SimState state_for(int n) {
  const nlkpp::SimConfig cfg = config_for(n);
  // Indicator over the middle half of the requested domain.
  return nlkpp::init(nlkpp::InitialData::indicator(0.125 * n * cfg.dx, 0.5),
                     cfg);
}

void bench_step_kernel(benchmark::State& state, const nlkpp::Kernel& k) {
  const int n = static_cast<int>(state.range(0));
  const nlkpp::SimConfig cfg = config_for(n);
  nlkpp::SimState sim = state_for(n);
  // The convenience step() rebuilds kernel samples per call, so this measures
  // the full per-step cost an uncached caller pays; the run loop amortizes
  // the sampling but the advection/reaction/tridiagonal work is identical.
  for (auto _ : state) {
    nlkpp::step(sim, k, cfg);
    benchmark::DoNotOptimize(sim.field.values.data());
  }
  state.SetComplexityN(n);
}

void bench_step_zero(benchmark::State& state) {
  bench_step_kernel(state, nlkpp::Kernel::zero());
}
BENCHMARK(bench_step_zero)->RangeMultiplier(4)->Range(512, 32768)->Complexity();

void bench_step_keller_segel(benchmark::State& state) {
  bench_step_kernel(state, nlkpp::Kernel::keller_segel(0.5, 1.0));
}
BENCHMARK(bench_step_keller_segel)
    ->RangeMultiplier(4)
    ->Range(512, 32768)
    ->Complexity();

void bench_step_step_kernel(benchmark::State& state) {
  bench_step_kernel(state, nlkpp::Kernel::step(0.25));
}
BENCHMARK(bench_step_step_kernel)
    ->RangeMultiplier(4)
    ->Range(512, 32768)
    ->Complexity();

void bench_step_power_law(benchmark::State& state) {
  bench_step_kernel(state, nlkpp::Kernel::power_law(1.0, 0.5, 1));
}
BENCHMARK(bench_step_power_law)
    ->RangeMultiplier(4)
    ->Range(512, 32768)
    ->Complexity();

}  // namespace

BENCHMARK_MAIN();
