#include <benchmark/benchmark.h>

#include "logtauber/catalog.hpp"
#include "logtauber/identities.hpp"

using namespace logtauber;

static void BM_DiscreteIdentity(benchmark::State& state) {
  const SeqSpec s = random_sequence(11);
  for (auto _ : state) benchmark::DoNotOptimize(lemma2_residual(s, state.range(0), 1.5).residual);
}
BENCHMARK(BM_DiscreteIdentity)->Arg(100)->Arg(10000);

static void BM_ContinuousIdentityPlateau(benchmark::State& state) {
  const FuncSpec f = thm3_function();
  for (auto _ : state) benchmark::DoNotOptimize(lemma1_upper_residual(f, 1e6, 1.5).residual);
}
BENCHMARK(BM_ContinuousIdentityPlateau);

static void BM_Toeplitz(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(toeplitz_bounds(state.range(0)).upper);
}
BENCHMARK(BM_Toeplitz)->Arg(1000)->Arg(1000000);
