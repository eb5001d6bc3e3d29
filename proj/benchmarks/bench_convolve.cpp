// Benchmarks for the convolution paths: one-shot direct vs FFT, and the
// reusable engine that amortizes plans and kernel spectra across steps.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nlkpp/convolve.hpp"
#include "nlkpp/kernel.hpp"

namespace {

nlkpp::Field make_field(int n) {
  nlkpp::Field u;
  u.grid.dx = 0.05;
  u.grid.n = n;
  u.grid.x0 = -0.5 * (n - 1) * u.grid.dx;
  u.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = u.grid.node(i);
    u.values[i] = 1.0 / (1.0 + x * x);
  }
  return u;
}

void bench_conv_direct(benchmark::State& state) {
  const nlkpp::Kernel k = nlkpp::Kernel::keller_segel(0.5, 1.0);
  const nlkpp::Field u = make_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlkpp::conv_direct(k, u));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bench_conv_direct)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void bench_conv_fft(benchmark::State& state) {
  const nlkpp::Kernel k = nlkpp::Kernel::keller_segel(0.5, 1.0);
  const nlkpp::Field u = make_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlkpp::conv(k, u));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bench_conv_fft)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

// The prefix-sum fast path for kernels that are constant on each half-line.
void bench_conv_step_kernel(benchmark::State& state) {
  const nlkpp::Kernel k = nlkpp::Kernel::step(0.25);
  const nlkpp::Field u = make_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(nlkpp::conv(k, u));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bench_conv_step_kernel)
    ->RangeMultiplier(4)
    ->Range(256, 65536)
    ->Complexity();

// Reusable engine: what one solver step pays once plans are cached.
void bench_engine_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nlkpp::Kernel k = nlkpp::Kernel::keller_segel(0.5, 1.0);
  const nlkpp::Field u = make_field(n);
  nlkpp::ConvolutionEngine engine(k, u.grid, u.grid.width() + u.grid.dx);
  std::vector<double> out(n);
  for (auto _ : state) {
    engine.apply(u.values, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(bench_engine_apply)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

// Engine construction cost (FFT planning + kernel sampling), paid once per
// domain extension.
void bench_engine_build(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nlkpp::Kernel k = nlkpp::Kernel::keller_segel(0.5, 1.0);
  const nlkpp::Field u = make_field(n);
  for (auto _ : state) {
    nlkpp::ConvolutionEngine engine(k, u.grid, u.grid.width() + u.grid.dx);
    benchmark::DoNotOptimize(&engine);
  }
}
BENCHMARK(bench_engine_build)->RangeMultiplier(8)->Range(512, 32768);

}  // namespace

BENCHMARK_MAIN();
