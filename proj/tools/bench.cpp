#include <benchmark/benchmark.h>

#include "aggeq/kmeans.hpp"
#include "aggeq/reduction.hpp"
#include "aggeq/rng.hpp"
#include "aggeq/scenario.hpp"
#include "aggeq/solver.hpp"

using namespace aggeq;

namespace {

const GameSpec& desk_game() {
  static const GameSpec game = generate(shrink(ScenarioConfig{}, 0.1));
  return game;
}

void BM_ProjectionT24(benchmark::State& state) {
  Rng rng(7);
  BoxSimplexSet set{std::nullopt, Vector(24, 0.0), Vector(24, 0.0)};
  double lo = 0.0, hi = 0.0;
  for (std::size_t t = 0; t < 24; ++t) {
    set.lower[t] = rng.uniform(0.0, 0.5);
    set.upper[t] = set.lower[t] + rng.uniform(0.0, 2.0);
    lo += set.lower[t];
    hi += set.upper[t];
  }
  set.energy = 0.5 * (lo + hi);
  Vector v(24), out(24);
  for (double& x : v) x = rng.uniform(-3.0, 3.0);
  ProjectionWorkspace ws;
  for (auto _ : state) {
    project_box_simplex(set, v, out, ws);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ProjectionT24);

void BM_SolveVne(benchmark::State& state) {
  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.stop_tol = 1e-12;
  cfg.residual_probes = 0;
  cfg.execution = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(solve_vne(desk_game(), cfg).aggregate.data());
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_SolveVne)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  const Matrix pts = player_matrix(desk_game());
  KMeansOptions ko;
  ko.execution = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(pts, 20, ko).objective);
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_KMeans)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
