#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bcvhelix/bour.hpp"
#include "bcvhelix/cmc.hpp"
#include "bcvhelix/oracle.hpp"

using namespace bcv;

namespace {

constexpr double pi = std::numbers::pi;

MetricProfile nil_U() {
  return {[](double u) { return 0.5 * (u * u + 2); }, [](double u) { return u; }, [](double) { return 1.0; }};
}

NaturalChart nil_chart() { return build_chart({0, 0.5}, {nil_U(), 1, 0.5, {-3, 3}}); }

}  // namespace

static void BM_QuadAdaptive(benchmark::State& state) {
  auto f = [](double x) { return 1 / std::sqrt(1 - x); };
  for (auto _ : state) benchmark::DoNotOptimize(quad_adaptive(f, 0, 1, 1e-10, 1e-10, 4000).value);
}
BENCHMARK(BM_QuadAdaptive);

static void BM_Christoffels(benchmark::State& state) {
  const BcvSpace sp{-1, 0.4};
  const AmbientPoint p{0.3, -0.2, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(christoffels(sp, p));
}
BENCHMARK(BM_Christoffels);

static void BM_BuildChart(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(nil_chart().domain());
}
BENCHMARK(BM_BuildChart);

static void BM_Tabulate(benchmark::State& state) {
  const auto chart = nil_chart();
  std::vector<double> us;
  for (int i = 0; i < state.range(0); ++i) us.push_back(-3 + 6.0 * i / (state.range(0) - 1));
  for (auto _ : state) benchmark::DoNotOptimize(chart.tabulate(us));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Tabulate)->Arg(41)->Arg(401);

static void BM_CmcFamily(benchmark::State& state) {
  const BcvSpace sp{-4, 0};
  for (auto _ : state) benchmark::DoNotOptimize(cmc_U(sp, 1, 1, 1, 3).seed.u_domain);
}
BENCHMARK(BM_CmcFamily);

static void BM_CmcResidual(benchmark::State& state) {
  const BcvSpace sp{1, 0.5};
  const auto fam = cmc_U(sp, 1, 0.5, 1, 0);
  double u = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmc_residual(sp, fam.seed, 1, u));
    u = u > 0.5 ? -0.5 : u + 1e-3;
  }
}
BENCHMARK(BM_CmcResidual);

static void BM_MeanCurvatureExtrinsic(benchmark::State& state) {
  const auto s = SurfaceChart::natural(nil_chart(), {-pi, pi});
  for (auto _ : state) benchmark::DoNotOptimize(mean_curvature_extrinsic(s, 0.7, 0.3));
}
BENCHMARK(BM_MeanCurvatureExtrinsic);

static void BM_GaussNumeric(benchmark::State& state) {
  const auto s = SurfaceChart::natural(nil_chart(), {-pi, pi});
  for (auto _ : state) benchmark::DoNotOptimize(gauss_numeric(s, 0.7, 0.3));
}
BENCHMARK(BM_GaussNumeric);

static void BM_SampleMesh(benchmark::State& state) {
  const auto s = SurfaceChart::natural(nil_chart(), Interval{-2.5, 2.5}, Interval{-pi, pi});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_mesh(s, n, n).vertices.size());
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SampleMesh)->Arg(11)->Arg(41)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
