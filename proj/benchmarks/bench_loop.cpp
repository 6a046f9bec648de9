#include <benchmark/benchmark.h>

#include "hemoswarm/transport.hpp"
#include "hemoswarm/walldepletion.hpp"

using namespace hemoswarm;

static void BM_integrate_loop(benchmark::State& state) {
  const PhysiologyParams phys = default_params();
  const VesselCircuit circuit = build_circuit(default_dataset(), phys);
  RobotSpec robots;
  robots.count = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        integrate_loop(circuit, robots, PowerPolicy::unlimited(), phys));
}
BENCHMARK(BM_integrate_loop)->Arg(10000000000LL)->Arg(1000000000000LL);

static void BM_wall_solver(benchmark::State& state) {
  const PhysiologyParams phys = default_params();
  const RobotSpec robots;
  VesselCase vc;
  vc.n_r = static_cast<int>(state.range(0));
  vc.n_x = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve_vessel(vc, robots, phys));
}
BENCHMARK(BM_wall_solver)->Args({64, 256})->Args({128, 512});

BENCHMARK_MAIN();
