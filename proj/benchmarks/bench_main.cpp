#include <benchmark/benchmark.h>

#include <random>

#include "wlqmc/markov.hpp"
#include "wlqmc/models.hpp"
#include "wlqmc/qmc.hpp"
#include "wlqmc/spectral.hpp"
#include "wlqmc/topology.hpp"

using namespace wlqmc;

// One local-update sweep over K slices of the M = 16 bouquet.
static void BM_Sweep(benchmark::State& state) {
  const Model md = build_bouquet(16);
  const double beta = 8;
  const std::size_t K = static_cast<std::size_t>(state.range(0));
  const LinkTable table(md.H, beta, K);
  Rng rng(1);
  Trajectory traj = Trajectory::constant(0, K);
  for (auto _ : state) benchmark::DoNotOptimize(sweep(traj, table, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(K));
}
BENCHMARK(BM_Sweep)->Arg(1000)->Arg(10000);

static void BM_ExactResample(benchmark::State& state) {
  const Model md = build_circle(1.0, 1.0, 0.0, static_cast<int>(state.range(0)));
  const double beta = 16;
  const std::size_t K = slices_for(beta, md.H.norm_inf());
  const LinkTable table(md.H, beta, K);
  Rng rng(2);
  Trajectory traj = Trajectory::constant(0, K);
  for (auto _ : state) {
    resample_trajectory(traj, table, rng);
    benchmark::ClobberMemory();
  }
  state.counters["K"] = static_cast<double>(K);
}
BENCHMARK(BM_ExactResample)->Arg(16)->Arg(64);

static void BM_DiagonalizeBouquet(benchmark::State& state) {
  const Model md = build_bouquet(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(md.H).gap);
}
BENCHMARK(BM_DiagonalizeBouquet)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_DiagonalizeTree(benchmark::State& state) {
  const Model md = build_tree_cover(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(md.H).E0);
  state.counters["dim"] = static_cast<double>(md.H.dim());
}
BENCHMARK(BM_DiagonalizeTree)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_CoarseGrain(benchmark::State& state) {
  const SparseHamiltonian H = assemble(ConfigSpace(2), {{0, 0, 0.25}, {1, 1, -0.25}, {1, 0, -0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(coarse_grain(H, 10.0, static_cast<std::size_t>(state.range(0))).defect);
}
BENCHMARK(BM_CoarseGrain)->Arg(50)->Arg(200);

static void BM_ShrinkSequence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pres = collapsing_chain(n);
  for (auto _ : state) benchmark::DoNotOptimize(generate_shrink_sequence(GroupWord{1}, pres).moves.size());
}
BENCHMARK(BM_ShrinkSequence)->Arg(8)->Arg(12);
BENCHMARK_MAIN();
