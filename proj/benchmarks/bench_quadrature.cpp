#include <benchmark/benchmark.h>

#include <cmath>

#include "logtauber/catalog.hpp"
#include "logtauber/quadrature.hpp"

using namespace logtauber;

static void BM_LogWeightedOscillatory(benchmark::State& state) {
  Piece p;
  p.value = [](double u) { return std::sin(u) / u; };
  const FuncSpec f = FuncSpec::single(p);
  const double b = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_log_weighted(f, 1.0, b).value);
}
BENCHMARK(BM_LogWeightedOscillatory)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_PlateauLogWeighted(benchmark::State& state) {
  const FuncSpec f = thm3_function();
  const LogPoint b{static_cast<double>(state.range(0)), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_log_weighted(f, LogPoint{0.0, 0.0}, b, {}).value);
}
BENCHMARK(BM_PlateauLogWeighted)->Arg(16)->Arg(512);

static void BM_LogLogExpression(benchmark::State& state) {
  const FuncSpec f = FuncSpec::of_expr("sin(log(log(u)))");
  for (auto _ : state) benchmark::DoNotOptimize(integrate_loglog_weighted(f, 3.0, 1e8).value);
}
BENCHMARK(BM_LogLogExpression);
