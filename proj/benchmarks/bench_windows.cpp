#include <benchmark/benchmark.h>

#include "logtauber/catalog.hpp"
#include "logtauber/tauberian.hpp"

using namespace logtauber;

static void BM_DiscreteWindowUpper(benchmark::State& state) {
  const SeqSpec s = *catalog_get("alt").sequence;
  for (auto _ : state) benchmark::DoNotOptimize(disc_window_upper(s, state.range(0), 1.5).value);
}
BENCHMARK(BM_DiscreteWindowUpper)->Arg(100)->Arg(10000);

static void BM_ContinuousWindowUpper(benchmark::State& state) {
  const FuncSpec f = *catalog_get("c1_conv(1)").function;
  Piece p;
  p.value = f.segments().front().body.value;
  const FuncSpec opaque = FuncSpec::single(p);
  for (auto _ : state) benchmark::DoNotOptimize(window_avg_upper(opaque, 1e3, 1.1).value);
}
BENCHMARK(BM_ContinuousWindowUpper);

static void BM_SlowOscModulus(benchmark::State& state) {
  const FuncSpec f = *catalog_get("sin_loglog").function;
  for (auto _ : state) benchmark::DoNotOptimize(slow_osc_modulus(f, 1e6, 1.05));
}
BENCHMARK(BM_SlowOscModulus);

static void BM_ConditionProfileSequence(benchmark::State& state) {
  const Spec s = catalog_get("alt").spec();
  const Grid g = Grid::decades(10, 1e4);
  for (auto _ : state) benchmark::DoNotOptimize(condition_profile(s, g).verdict.size());
}
BENCHMARK(BM_ConditionProfileSequence)->Unit(benchmark::kMillisecond);
