#include <benchmark/benchmark.h>

#include <cmath>

#include "gbb/kernels.hpp"
#include "gbb/quadrature.hpp"

namespace {

void BM_CovQ(benchmark::State& state) {
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gbb::cov_Q(0.8, s, 0.7));
    s = s < 0.9 ? s + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_CovQ);

void BM_FhKernelQClosed(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gbb::fh_kernel_q(0.75, 0.3, 0.9));
}
BENCHMARK(BM_FhKernelQClosed);

void BM_FhKernelQIntegral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gbb::fh_kernel_q_integral(0.75, 0.3, 0.9));
}
BENCHMARK(BM_FhKernelQIntegral);

void BM_QuadOracleLogSquared(benchmark::State& state) {
  auto f = [](double x) { return std::log1p(-x) * std::log1p(-x); };
  for (auto _ : state) benchmark::DoNotOptimize(gbb::quad_oracle(f, 0.0, 1.0 - 1e-8, 1e-8));
}
BENCHMARK(BM_QuadOracleLogSquared);

}  // namespace
