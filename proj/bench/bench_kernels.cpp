/*
 * SPDX-License-Identifier: Apache-2.0
 */
// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare
// thread counts.

#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ipred/fading.hpp"
#include "ipred/gp.hpp"
#include "ipred/kernels.hpp"

namespace {

using namespace ipred;

std::vector<double> uniform_inputs(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) * 0.37;
  return x;
}

template <auto Fill>
void BM_fill_rbf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = uniform_inputs(n);
  std::vector<double> out(n * n);
  for (auto _ : state) {
    Fill(x, x, 0.5, 2.5, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_fill_rbf<kernels::serial::fill_rbf>)->Name("fill_rbf/serial")->Arg(75)->Arg(500)->Arg(2000);
BENCHMARK(BM_fill_rbf<kernels::omp::fill_rbf>)->Name("fill_rbf/omp")->Arg(75)->Arg(500)->Arg(2000);

template <auto Filter>
void BM_fir_filter(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto taps = gaussian_doppler_taps(0.95);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> in(n + taps.size() - 1);
  for (auto& v : in) v = {normal(rng), normal(rng)};
  std::vector<std::complex<double>> out(n);
  for (auto _ : state) {
    Filter(in, taps, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_fir_filter<kernels::serial::fir_filter>)->Name("fir_filter/serial")->Arg(100000)->Arg(1000000);
BENCHMARK(BM_fir_filter<kernels::omp::fir_filter>)->Name("fir_filter/omp")->Arg(100000)->Arg(1000000);

template <auto Apply>
void BM_sliding_window(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GpModel model(RbfKernel{0.5, 2.5}, uniform_inputs(75), 1e-3);
  std::vector<double> q{75.0 * 0.37};
  const auto lp = model.linear_predictor(q);
  const std::vector<double> weights(lp.weights.data(), lp.weights.data() + 75);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<double> series(n + 74);
  for (auto& v : series) v = normal(rng);
  std::vector<double> out(n);
  for (auto _ : state) {
    Apply(series, weights, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_sliding_window<kernels::serial::sliding_window_apply>)->Name("sliding_window/serial")->Arg(100000);
BENCHMARK(BM_sliding_window<kernels::omp::sliding_window_apply>)->Name("sliding_window/omp")->Arg(100000);

void BM_evaluate_grid(benchmark::State& state) {
  const auto x = uniform_inputs(75);
  const auto paths = sample_prior(RbfKernel{0.5, 2.5}, x, 1, 3);
  const TrainingSet train{x, paths.front(), 1e-3};
  const HyperparameterGrid grid{};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid(train, grid).best);
}
BENCHMARK(BM_evaluate_grid)->Name("evaluate_grid/omp")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
