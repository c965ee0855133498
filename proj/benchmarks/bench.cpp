// Micro-benchmarks for the hot paths: pointwise curvature assembly, the
// asymptotic-expansion tension evaluation, and conformal-geodesic integration.

#include <benchmark/benchmark.h>

#include "cgholo/tensor.hpp"
#include "cgholo/geodesic.hpp"
#include "cgholo/ambient.hpp"
#include "cgholo/hmap.hpp"

using namespace cgholo;

static void BM_CurvatureAt(benchmark::State& state) {
  auto m = std::make_shared<ChartMetric>(ChartMetric::round_sphere_polar(3));
  Vec y(3);
  y << 0.7, 1.1, 0.3;
  for (auto _ : state) {
    auto cp = curvature_at(*m, y);
    benchmark::DoNotOptimize(cp.scalar);
  }
}
BENCHMARK(BM_CurvatureAt);

static void BM_Tension(benchmark::State& state) {
  auto m = std::make_shared<ChartMetric>(ChartMetric::euclidean(2));
  std::vector<Expr> p(3, Expr::number(0.0));
  m = std::make_shared<ChartMetric>(schouten_override(*m, p, {}));
  auto curve = std::make_shared<ExprCurve>(
      std::vector<Expr>{Expr::parse("(1 - t^2)/(1 + t^2)", {"t"}),
                        Expr::parse("2*t/(1 + t^2)", {"t"})});
  auto amb = std::make_shared<AmbientMetric>(m, AmbientMode::ExactHyperbolicUpperHalf);
  ExpansionMap map(curve, m, +1);
  for (auto _ : state) {
    Vec tau = tension(map, *amb, 1e-2, 0.3);
    benchmark::DoNotOptimize(tau);
  }
}
BENCHMARK(BM_Tension);

static void BM_IntegrateCG(benchmark::State& state) {
  auto m = std::make_shared<ChartMetric>(ChartMetric::round_sphere_polar(3));
  Vec y(3), v(3);
  y << 1.2, 0.8, 0.0;
  v << 0.0, 1.0, 0.3;
  Vec a = Vec::Zero(3);
  for (auto _ : state) {
    auto traj = integrate_cg(m, CGState{0.0, y, v, a}, 1.0);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_IntegrateCG);

BENCHMARK_MAIN();
