#include <benchmark/benchmark.h>

#include "ntsurf/expr.hpp"

using namespace ntsurf::expr;

namespace {

constexpr const char* kText = "lambda*exp(mu*v)*cos(v)*sin(u) + sqrt(1+u^2)/(2+cosh(v))";
const ParamSet kParams{"lambda", "mu"};

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_expression(kText, kParams));
}
BENCHMARK(BM_Parse);

void BM_Differentiate(benchmark::State& state) {
  const Expression e = parse_expression(kText, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(differentiate(differentiate(e, "u"), "v"));
}
BENCHMARK(BM_Differentiate);

void BM_Evaluate(benchmark::State& state) {
  const Expression e = parse_expression(kText, kParams);
  const Bindings b{{"u", 0.3}, {"v", 0.7}, {"lambda", 1.5}, {"mu", 0.5}};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(e, b));
}
BENCHMARK(BM_Evaluate);

}  // namespace
