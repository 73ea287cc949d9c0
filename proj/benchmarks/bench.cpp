// Microbenchmarks for the hot paths: the Poisson solve, one explicit step,
// the entropy quadrature and the norm kernels.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "pksfv/energy.hpp"
#include "pksfv/grid.hpp"
#include "pksfv/norms.hpp"
#include "pksfv/poisson.hpp"
#include "pksfv/stepper.hpp"

namespace {

pksfv::CellField bump_state(const pksfv::RadialGrid& g) {
  pksfv::CellField u(g.cells());
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double z = g.center[i] / 0.2;
    u[i] = 1.0 + 4.0 * std::exp(-z * z);
  }
  return u;
}

void BM_PoissonSolve(benchmark::State& state) {
  const auto g = pksfv::make_uniform_grid(3, 1.0, state.range(0));
  const auto u = bump_state(g);
  for (auto _ : state) {
    auto sol = pksfv::solve_poisson(u, g);
    benchmark::DoNotOptimize(sol.phi.data());
  }
}
BENCHMARK(BM_PoissonSolve)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMicrosecond);

void BM_Step(benchmark::State& state) {
  const auto g = pksfv::make_uniform_grid(3, 1.0, state.range(0));
  pksfv::ModelParams p;
  p.dim = 3;
  p.delta = 1e-3;
  p.validate_and_finalize();
  pksfv::StepperConfig cfg;
  auto u = bump_state(g);
  for (auto _ : state) {
    pksfv::step(u, p, cfg, g);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_Step)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMicrosecond);

void BM_EntropyDensity(benchmark::State& state) {
  double u = 0.0;
  for (auto _ : state) {
    u += 0.01;
    if (u > 50.0) u = 0.0;
    benchmark::DoNotOptimize(pksfv::b_delta(u, 1e-3, 4.0 / 3.0));
  }
}
BENCHMARK(BM_EntropyDensity)->Unit(benchmark::kMicrosecond);

void BM_LpNorm(benchmark::State& state) {
  const auto g = pksfv::make_uniform_grid(3, 1.0, state.range(0));
  const auto u = bump_state(g);
  for (auto _ : state)
    benchmark::DoNotOptimize(pksfv::lp_norm(u, 4.0 / 3.0, g));
}
BENCHMARK(BM_LpNorm)->Arg(400)->Arg(1600)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
