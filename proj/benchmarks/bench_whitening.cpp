#include <benchmark/benchmark.h>

#include "gbb/feldman_hajek.hpp"

namespace {

void BM_CovMatrix(benchmark::State& state) {
  const auto grid = gbb::fh_trend_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gbb::cov_matrix(gbb::CovKernel::bridge(0.8), grid).m.data());
}
BENCHMARK(BM_CovMatrix)->Arg(128)->Arg(512);

void BM_HsNorm(benchmark::State& state) {
  const auto grid = gbb::fh_trend_grid(static_cast<std::size_t>(state.range(0)));
  const auto r = gbb::cov_matrix(gbb::CovKernel::brownian_bridge(), grid);
  const auto rc = gbb::cov_matrix(gbb::CovKernel::bridge(0.8), grid);
  for (auto _ : state) benchmark::DoNotOptimize(gbb::hs_norm_sq(r, rc));
}
BENCHMARK(BM_HsNorm)->Arg(128)->Arg(512);

void BM_WhitenSpectrum(benchmark::State& state) {
  const auto grid = gbb::fh_trend_grid(static_cast<std::size_t>(state.range(0)));
  const auto r = gbb::cov_matrix(gbb::CovKernel::brownian_bridge(), grid);
  const auto rc = gbb::cov_matrix(gbb::CovKernel::bridge(0.8), grid);
  for (auto _ : state) benchmark::DoNotOptimize(gbb::whiten_spectrum(r, rc).data());
}
BENCHMARK(BM_WhitenSpectrum)->Arg(128)->Arg(512);

void BM_QConsistency(benchmark::State& state) {
  const auto grid = gbb::make_grid(gbb::GridKind::Geometric, static_cast<std::size_t>(state.range(0)), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(gbb::discrete_q_consistency(0.75, *grid).max_rel_deviation);
}
BENCHMARK(BM_QConsistency)->Arg(128)->Arg(512);

}  // namespace
