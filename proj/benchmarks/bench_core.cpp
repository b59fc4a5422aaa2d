#include <benchmark/benchmark.h>

#include "cgclust/estimators.hpp"
#include "cgclust/neighbors.hpp"
#include "cgclust/optimizer.hpp"
#include "cgclust/synth.hpp"

namespace {

using namespace cgclust;

Dataset disk_annulus(std::size_t n) { return sample_disk_annulus(DiskAnnulusSpec{}, n, SeedSpec(1)); }

void BM_NeighborTable(benchmark::State& state) {
  const auto ds = disk_annulus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(NeighborTable::build(ds));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NeighborTable)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_Cvr(benchmark::State& state) {
  const auto ds = disk_annulus(static_cast<std::size_t>(state.range(0)));
  const auto table = NeighborTable::build(ds);
  const auto truth = ds.ground_truth();
  for (auto _ : state) benchmark::DoNotOptimize(cvr(table, truth));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Cvr)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_Relaxation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto table = NeighborTable::build(disk_annulus(n));
  const auto aff = build_affinity(table);
  const auto rank = default_embedding_rank(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_gram_relaxation(aff, rank, SeedSpec(2)));
}
BENCHMARK(BM_Relaxation)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Cluster(benchmark::State& state) {
  const auto ds = disk_annulus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cluster(ds, 2));
}
BENCHMARK(BM_Cluster)->Arg(150)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
