#include <benchmark/benchmark.h>

#include "ncg/connes.hpp"
#include "ncg/operators.hpp"
#include "ncg/spectral.hpp"

namespace {

void BM_ConnesPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = ncg::build_path(n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(ncg::connes_distance(g, {0, n}).distance);
}
BENCHMARK(BM_ConnesPath)->Arg(2)->Arg(8)->Arg(32)->Arg(128);

void BM_ConnesRandom(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = ncg::build_random(n, 4.0 / double(n), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ncg::connes_distance(g, {0, n - 1}).distance);
}
BENCHMARK(BM_ConnesRandom)->Arg(10)->Arg(40)->Arg(160);

void BM_DistanceMatrix(benchmark::State& state) {
  const auto g = ncg::build_random(static_cast<std::size_t>(state.range(0)), 0.3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ncg::distance_matrix(g).distance.sum());
}
BENCHMARK(BM_DistanceMatrix)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_TreeNorm(benchmark::State& state) {
  const auto a = ncg::adjacency_map(ncg::build_binary_tree(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(ncg::spectral_norm(a).value);
}
BENCHMARK(BM_TreeNorm)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);

void BM_OperatorIdentities(benchmark::State& state) {
  const auto g = ncg::build_random(static_cast<std::size_t>(state.range(0)), 0.2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ncg::check_operator_identities(g).size());
}
BENCHMARK(BM_OperatorIdentities)->Arg(30)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
