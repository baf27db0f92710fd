#include <benchmark/benchmark.h>

#include "latvar/closedform.hpp"
#include "latvar/combinatorics.hpp"
#include "latvar/lattice.hpp"
#include "latvar/lyapunov.hpp"
#include "latvar/simulate.hpp"

namespace {

void BM_variance_field_2d(benchmark::State& state) {
  const latvar::LatticeSpec spec{2, state.range(0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(latvar::variance_field(spec));
  }
  state.SetItemsProcessed(state.iterations() * spec.state_count());
}
BENCHMARK(BM_variance_field_2d)->Arg(64)->Arg(256)->Arg(1024);

void BM_diagonal_variances_2d(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(latvar::diagonal_variances_2d(state.range(0)));
  }
}
BENCHMARK(BM_diagonal_variances_2d)->Arg(200)->Arg(2000);

void BM_variance_3d_point(benchmark::State& state) {
  const long long n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latvar::variance_3d(n, n, n));
  }
}
BENCHMARK(BM_variance_3d_point)->Arg(15)->Arg(50);

void BM_return_prob_series_3d(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(latvar::return_prob_series(3, state.range(0)));
  }
}
BENCHMARK(BM_return_prob_series_3d)->Arg(1000)->Arg(10000);

void BM_return_prob_3d_double_sum(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(latvar::return_prob(3, state.range(0)));
  }
}
BENCHMARK(BM_return_prob_3d_double_sum)->Arg(100)->Arg(500);

void BM_lyapunov_solve(benchmark::State& state) {
  const latvar::LatticeSpec spec{2, state.range(0)};
  const auto lap = latvar::build_laplacian(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(latvar::solve_triangular_lyapunov(lap));
  }
  state.SetItemsProcessed(state.iterations() * spec.state_count() * spec.state_count());
}
BENCHMARK(BM_lyapunov_solve)->Arg(8)->Arg(16)->Arg(31);

void BM_simulate_lattice(benchmark::State& state) {
  const latvar::LatticeSpec spec{2, 10};
  latvar::SimulationConfig cfg = latvar::SimulationConfig::defaults(2);
  cfg.horizon = 30.0;
  cfg.burn_in = 10.0;
  cfg.ensemble = 8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(latvar::simulate_lattice(spec, cfg, 1));
  }
  const long long steps = static_cast<long long>(cfg.horizon / cfg.dt);
  state.SetItemsProcessed(state.iterations() * spec.state_count() * cfg.ensemble * steps);
}
BENCHMARK(BM_simulate_lattice);

}  // namespace

BENCHMARK_MAIN();
