#include <benchmark/benchmark.h>

#include "logtauber/catalog.hpp"
#include "logtauber/means.hpp"

using namespace logtauber;

static void BM_Harmonic(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(harmonic(state.range(0)));
}
BENCHMARK(BM_Harmonic)->Arg(1000)->Arg(1000000);

static void BM_DiscreteSeriesDecades(benchmark::State& state) {
  const Spec s{*catalog_get("alt_k").sequence};
  const Grid g = Grid::decades(10, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mean_series(s, g, MeanKind::L1).points.size());
}
BENCHMARK(BM_DiscreteSeriesDecades)->Arg(10000)->Arg(1000000);

static void BM_ExpressionSeries(benchmark::State& state) {
  const Spec s{SeqSpec::of_expr("sin(k) + (-1)^k * log(k)")};
  const Grid g = Grid::decades(10, 1e5);
  for (auto _ : state) benchmark::DoNotOptimize(mean_series(s, g, MeanKind::L2).points.size());
}
BENCHMARK(BM_ExpressionSeries);

static void BM_ContinuousTau(benchmark::State& state) {
  const FuncSpec f = FuncSpec::of_expr("2 + sin(u)/u");
  for (auto _ : state) benchmark::DoNotOptimize(cont_l1(f, 1e4).value);
}
BENCHMARK(BM_ContinuousTau);
