#include <benchmark/benchmark.h>

#include "quasilat/cutproject.hpp"
#include "quasilat/pointset.hpp"

using namespace quasilat;

static void BM_SilverModelSet(benchmark::State& state) {
  const auto scheme = CutProjectScheme::silver(1.0);
  const double T = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_model_set(scheme, T));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SilverModelSet)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

static void BM_HeisenbergSymplecticProduct(benchmark::State& state) {
  const PointPatch xi = generate_model_set(CutProjectScheme::silver(1.0), static_cast<double>(state.range(0)));
  const PointPatch delta = generate_model_set(CutProjectScheme::silver(1.0, 2), 3.0);
  const auto H = CentralExtensionGroup::heisenberg();
  for (auto _ : state) benchmark::DoNotOptimize(symplectic_product(xi, delta, H, 4));
}
BENCHMARK(BM_HeisenbergSymplecticProduct)->Arg(300)->Arg(1000);

static void BM_MinGap(benchmark::State& state) {
  const PointPatch P = generate_model_set(CutProjectScheme::silver(1.0), static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(min_gap(P));
}
BENCHMARK(BM_MinGap)->Arg(1000)->Arg(10000);

static void BM_MinkowskiSquare(benchmark::State& state) {
  const PointPatch P = generate_model_set(CutProjectScheme::silver(1.0), static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(minkowski(P, P));
}
BENCHMARK(BM_MinkowskiSquare)->Arg(100)->Arg(400);

static void BM_CheckMeyerian(benchmark::State& state) {
  const PointPatch P = generate_model_set(CutProjectScheme::silver(1.0), 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(check_meyerian(P, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CheckMeyerian)->Arg(1)->Arg(3);
