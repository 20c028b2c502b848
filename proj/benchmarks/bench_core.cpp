#include <benchmark/benchmark.h>

#include <complex>

#include "csvortex/liouville.hpp"
#include "csvortex/shooting.hpp"
#include "csvortex/solver.hpp"
#include "csvortex/topological.hpp"

using namespace csvortex;

namespace {

void BM_TopologicalSolve(benchmark::State& state) {
  const double step = 1.0 / static_cast<double>(state.range(0));
  const std::vector<Point> p{{0.7, 0.3}, {-0.4, -0.6}};
  const double R = default_topological_radius(p);
  const GridPtr g = make_disk_grid(R, rings_for_step(R, step), 64);
  for (auto _ : state) benchmark::DoNotOptimize(solve_topological(p, g).U.data());
  state.counters["nodes"] = g->size();
}
BENCHMARK(BM_TopologicalSolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_L2Factorization(benchmark::State& state) {
  const double step = 1.0 / static_cast<double>(state.range(0));
  const GridPtr g = make_disk_grid(40.0, rings_for_step(40.0, step), 64);
  for (auto _ : state) {
    L2Solver l2(std::complex<double>(0.1, 0.05), Rational(3), g);
    benchmark::DoNotOptimize(&l2);
  }
  state.counters["nodes"] = g->size();
}
BENCHMARK(BM_L2Factorization)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_PicardFixedPoint(benchmark::State& state) {
  const GaugeModel m(1, 1, {{1.0, 0.0}, {-0.5, 0.5}}, {{0.0, -0.5}});
  const MixedProblem prob(m, 0.02);
  const std::complex<double> alpha(1e-3, -1e-3);
  prob.picard_iterate(alpha);  // warm the per-alpha cache
  for (auto _ : state) benchmark::DoNotOptimize(prob.picard_iterate(alpha).xi.data());
}
BENCHMARK(BM_PicardFixedPoint)->Unit(benchmark::kMillisecond);

void BM_RadialShoot(benchmark::State& state) {
  const GaugeModel m(1, 2, {{0.0, 0.0}});
  for (auto _ : state) benchmark::DoNotOptimize(radial_shoot(m, -6.0, -6.0, 1e4).u1);
}
BENCHMARK(BM_RadialShoot)->Unit(benchmark::kMicrosecond);

void BM_LiouvilleMass(benchmark::State& state) {
  const GridPtr g = make_disk_grid(1e3, rings_for_step(1e3, 0.025), 64);
  const LiouvilleProfile p(0.0, {0.2, 0.1}, Rational(2), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(liouville_mass(p, *g));
}
BENCHMARK(BM_LiouvilleMass)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
