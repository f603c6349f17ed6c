#include <benchmark/benchmark.h>

#include "gbb/girsanov.hpp"
#include "gbb/sampler.hpp"

namespace {

void BM_SampleExact(benchmark::State& state) {
  const auto grid = gbb::make_grid(gbb::GridKind::Geometric, static_cast<std::size_t>(state.range(0)), 1e-4);
  const auto fam = gbb::DriftFamily::bridge(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(gbb::sample_exact(fam, grid, 1, 1000, 1).values().data());
  state.SetItemsProcessed(state.iterations() * 1000 * state.range(0));
}
BENCHMARK(BM_SampleExact)->Arg(256)->Arg(1024);

void BM_SampleEm(benchmark::State& state) {
  const auto grid = gbb::make_grid(gbb::GridKind::Geometric, static_cast<std::size_t>(state.range(0)), 1e-4);
  const auto fam = gbb::DriftFamily::bridge(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(gbb::sample_em(fam, grid, 1, 1000, 1).values().data());
  state.SetItemsProcessed(state.iterations() * 1000 * state.range(0));
}
BENCHMARK(BM_SampleEm)->Arg(256)->Arg(1024);

void BM_SamplePerturbed(benchmark::State& state) {
  const auto grid = gbb::make_grid(gbb::GridKind::Geometric, 512, 1e-4);
  const auto fam = gbb::DriftFamily::perturbed_tanh(0.25, 0.35);
  for (auto _ : state) benchmark::DoNotOptimize(gbb::sample_perturbed(fam, grid, 1, 1000, 1).paths.values().data());
}
BENCHMARK(BM_SamplePerturbed);

void BM_BridgeGirsanov(benchmark::State& state) {
  const auto grid = gbb::make_grid(gbb::GridKind::Geometric, 1024, 1e-4);
  for (auto _ : state) {
    const auto tr = gbb::run_bridge_girsanov(0.8, grid, 1, 2000, 1, {grid->last()});
    benchmark::DoNotOptimize(tr.log_m.data());
  }
}
BENCHMARK(BM_BridgeGirsanov);

}  // namespace
