#include <benchmark/benchmark.h>

#include "hemoswarm/bloodgas.hpp"
#include "hemoswarm/policies.hpp"
#include "hemoswarm/storage.hpp"

using namespace hemoswarm;

static void BM_saturation_slope(benchmark::State& state) {
  const HillCurve curve = HillCurve::from_params(default_params());
  double c = 1e20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(saturation_slope(curve, c));
    c = c < 1e23 ? c * 1.01 : 1e20;
  }
}
BENCHMARK(BM_saturation_slope);

static void BM_vdw_density(benchmark::State& state) {
  double p = 1e7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vdw_density(p));
    p = p < 4e8 ? p * 1.1 : 1e7;
  }
}
BENCHMARK(BM_vdw_density);

static void BM_markov_stationary(benchmark::State& state) {
  const MarkovDataModel model;
  for (auto _ : state) benchmark::DoNotOptimize(markov_stationary(model));
}
BENCHMARK(BM_markov_stationary);

static void BM_transport_feasibility(benchmark::State& state) {
  const PhysiologyParams phys = default_params();
  const RobotSpec robots;
  const TransportRequirements req;
  double r = 0.1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transport_feasibility(r, 0.3, req, robots, phys));
    r = r < 0.9e-6 ? r + 1e-8 : 0.1e-6;
  }
}
BENCHMARK(BM_transport_feasibility);
