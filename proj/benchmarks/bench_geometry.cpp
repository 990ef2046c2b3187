#include <benchmark/benchmark.h>

#include "ntsurf/classify.hpp"
#include "ntsurf/invariants.hpp"
#include "ntsurf/transport.hpp"

using namespace ntsurf;

namespace {

const ParamMap kVr11{{"lambda", 1.0}, {"mu", 1.0}};

void BM_CatalogJet(benchmark::State& state) {
  const SurfacePatch s = make_catalog_surface("vranceanu", kVr11);
  for (auto _ : state) benchmark::DoNotOptimize(s.jet(0.3, 0.7));
}
BENCHMARK(BM_CatalogJet);

void BM_ExpressionJet(benchmark::State& state) {
  const SurfacePatch s = make_expression_surface(
      {"lambda*exp(mu*v)*cos(v)*cos(u)", "lambda*exp(mu*v)*cos(v)*sin(u)", "lambda*exp(mu*v)*sin(v)*cos(u)",
       "lambda*exp(mu*v)*sin(v)*sin(u)"},
      kVr11, Domain{0, 6.28, 0, 1});
  for (auto _ : state) benchmark::DoNotOptimize(s.jet(0.3, 0.7));
}
BENCHMARK(BM_ExpressionJet);

void BM_AnalyzePoint(benchmark::State& state) {
  const SurfacePatch s = make_catalog_surface("complex_curve");
  for (auto _ : state) benchmark::DoNotOptimize(analyze_point(s, 0.4, -0.2));
}
BENCHMARK(BM_AnalyzePoint);

void BM_InvariantGrid(benchmark::State& state) {
  const SurfacePatch s = make_catalog_surface("vranceanu", kVr11);
  const int n = static_cast<int>(state.range(0));
  const GridSpec g(n, n, s.domain());
  for (auto _ : state) benchmark::DoNotOptimize(invariant_grid(s, g));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_InvariantGrid)->Arg(16)->Arg(50);

void BM_EvoluteRegularity(benchmark::State& state) {
  const SurfacePatch s = make_catalog_surface("vranceanu", kVr11);
  const TransportSurface ts = transport_surface(s, evolute_offsets(s, default_frame(s)));
  const GridSpec g(32, 32, Domain{0, 6.28, 0.1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(regularity_report(ts, g));
}
BENCHMARK(BM_EvoluteRegularity);

void BM_VerifyT10(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_theorem("T10"));
}
BENCHMARK(BM_VerifyT10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
