#include <benchmark/benchmark.h>

#include "sladm/sladm.hpp"

using namespace sladm;

namespace {

localscale::PotentialPtr quadratic() {
  return localscale::expression_potential(realline::parse_function("1 + x^2"));
}

void BM_TriangleAverage(benchmark::State& state) {
  const auto q = state.range(0) ? localscale::example6_potential() : quadratic();
  const localscale::LocalScale s(q);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.F(x, 1.0));
    x += 1e-3;
  }
}
BENCHMARK(BM_TriangleAverage)->Arg(0)->Arg(1);

// Fresh scale each iteration: the memo would otherwise answer.
void BM_LocalScaleD(benchmark::State& state) {
  const auto q = state.range(0) ? localscale::example6_potential() : quadratic();
  for (auto _ : state) {
    const localscale::LocalScale s(q);
    benchmark::DoNotOptimize(s.d(37.5));
  }
}
BENCHMARK(BM_LocalScaleD)->Arg(0)->Arg(1);

void BM_BuildWindow(benchmark::State& state) {
  const localscale::LocalScale s(localscale::example6_potential());
  const double half = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fss::build_window(s, -half, half).steps());
  }
}
BENCHMARK(BM_BuildWindow)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SBounds(benchmark::State& state) {
  const localscale::LocalScale s(quadratic());
  auto one = [](double) { return 1.0; };
  const hardy::HardyWeights w{one, one, static_cast<double>(state.range(0))};
  hardy::HardyConfig cfg;
  cfg.grid.max_exponent = 10;
  for (auto _ : state) {
    fss::FssAtlas atlas(s);
    benchmark::DoNotOptimize(hardy::s_operator_bounds(atlas, w, cfg).bound.upper);
  }
}
BENCHMARK(BM_SBounds)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
