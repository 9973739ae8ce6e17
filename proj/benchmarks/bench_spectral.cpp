#include <benchmark/benchmark.h>

#include "quasilat/cutproject.hpp"
#include "quasilat/diffraction.hpp"
#include "quasilat/spectral.hpp"

using namespace quasilat;

static void BM_TwistedDensity(benchmark::State& state) {
  const double T = static_cast<double>(state.range(0));
  const PointPatch P = generate_model_set(CutProjectScheme::silver(1.0), T);
  const auto schedule = geometric_schedule(T);
  const Character xi{{0.3}};
  for (auto _ : state) benchmark::DoNotOptimize(twisted_density(P, xi, schedule));
}
BENCHMARK(BM_TwistedDensity)->Arg(1000)->Arg(10000);

static void BM_PalmHeisenberg(benchmark::State& state) {
  const PointPatch L = heisenberg_integer_lattice(10.0, 200.0);
  const PalmEvaluator palm(L, 10.0, 200.0);
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(palm.coefficient(Character{{theta}}));
    theta += 1e-3;
  }
}
BENCHMARK(BM_PalmHeisenberg);

static void BM_EpsilonDual(benchmark::State& state) {
  const PointPatch P = generate_model_set(CutProjectScheme::silver(2.0), 200.0);
  for (auto _ : state) benchmark::DoNotOptimize(epsilon_dual(P, 0.5, {10.0, 1e-3}));
}
BENCHMARK(BM_EpsilonDual);

static void BM_Autocorrelation(benchmark::State& state) {
  const double T = static_cast<double>(state.range(0));
  const PointPatch P = generate_model_set(CutProjectScheme::silver(1.0), T + 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(autocorrelation(P, T, 5.0));
}
BENCHMARK(BM_Autocorrelation)->Arg(1000)->Arg(10000);

static void BM_BraggScan(benchmark::State& state) {
  const PointPatch P = generate_model_set(CutProjectScheme::silver(1.0), 400.0);
  for (auto _ : state) benchmark::DoNotOptimize(bragg_scan(P, 0.5, {5.0, 1e-2}, 1.0, 400.0));
}
BENCHMARK(BM_BraggScan)->Unit(benchmark::kMillisecond);
