#include <benchmark/benchmark.h>

#include "pam/chaos.hpp"
#include "pam/noise.hpp"
#include "pam/rng.hpp"
#include "pam/solver.hpp"
#include "pam/specfn.hpp"

using namespace pam;

static void BM_SpatialSynthesis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridSpec grid{1, 16.0, n, 0.01, 1.0};
  SpatialSynthesizer synth(NoiseSpec::white_preset(1), grid);
  Rng rng(1);
  std::vector<double> field(grid.points());
  for (auto _ : state) {
    synth.sample(rng, field);
    benchmark::DoNotOptimize(field.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SpatialSynthesis)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_SimplexMc(benchmark::State& state) {
  const SimplexParams p{1.0, {-0.4, 0.2, -0.1}};
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simplex_integral_mc(p, 100000, seed++).value);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SimplexMc);

static void BM_ChaosVarianceLevel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NoiseSpec preset = NoiseSpec::white_preset(1);
  const InitialCondition one = InitialCondition::constant_one();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        chaos_variance(n, 1.0, preset, one, {50000, seed++}).variance);
  }
  state.SetItemsProcessed(state.iterations() * 50000);
}
BENCHMARK(BM_ChaosVarianceLevel)->Arg(1)->Arg(3)->Arg(5);

static void BM_SolverStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SolveConfig c;
  c.spec = NoiseSpec::white_preset(1);
  c.grid = {1, 8.0, n, 1e-3, 0.1};
  c.u0 = InitialCondition::constant_one();
  c.snapshot_times = {0.1};
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_one_path(c, seed++).fields.data());
  }
  // 100 steps per solve
  state.SetItemsProcessed(state.iterations() * 100 * n);
}
BENCHMARK(BM_SolverStep)->Arg(256)->Arg(512);

static void BM_SmoothingIntegral(benchmark::State& state) {
  const NoiseSpec spec = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  const double z0[1] = {0.0};
  double s = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smoothing_integral(s, 0.7, z0, spec));
    s = s < 1.0 ? s * 1.1 : 1e-3;
  }
}
BENCHMARK(BM_SmoothingIntegral);

BENCHMARK_MAIN();
