#include <benchmark/benchmark.h>

#include "geoloop/hyp_loops.hpp"
#include "geoloop/sph_loops.hpp"

#include <numbers>

using namespace geoloop;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_Dist(benchmark::State& state) {
  const auto k = static_cast<Curvature>(state.range(0));
  const ModelPoint a = ModelPoint::base(k);
  const ModelPoint b = exp_point(a, tangent_unit(a, Vec3(1, 0.3, 0)), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(dist(a, b));
}
BENCHMARK(BM_Dist)
    ->Arg(static_cast<int>(Curvature::Spherical))
    ->Arg(static_cast<int>(Curvature::Flat))
    ->Arg(static_cast<int>(Curvature::Hyperbolic));

void BM_RegularMetric(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(TetraMetric::regular_from_angle(Curvature::Hyperbolic, kPi / 4));
}
BENCHMARK(BM_RegularMetric);

void BM_Unroll(benchmark::State& state) {
  const TetraMetric t = TetraMetric::regular_from_angle(Curvature::Hyperbolic, kPi / 4);
  const CuttingSequence s = cutting_sequence(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(unroll(t, s));
}
BENCHMARK(BM_Unroll)->Args({0, 1})->Args({1, 2})->Args({3, 4});

void BM_Shoot(benchmark::State& state) {
  const TetraMetric t = TetraMetric::regular_from_edge(Curvature::Flat, 1.0);
  const ShotStart st = edge_start(t, 3, 0, 0.37, 1.0);
  const double len = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(shoot(t, st.point, st.direction, len));
}
BENCHMARK(BM_Shoot)->Arg(10)->Arg(100);

void BM_LoopCensus(benchmark::State& state) {
  const TetraMetric t = TetraMetric::regular_from_angle(Curvature::Spherical, 0.6 * kPi);
  for (auto _ : state) benchmark::DoNotOptimize(loop_census(t));
}
BENCHMARK(BM_LoopCensus)->Unit(benchmark::kMillisecond);

void BM_VertexLoop(benchmark::State& state) {
  const TetraMetric t = TetraMetric::regular_from_angle(Curvature::Hyperbolic, kPi / 4);
  const int p = static_cast<int>(state.range(0)), q = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(vertex_loop(t, p, q));
}
BENCHMARK(BM_VertexLoop)->Args({0, 1})->Args({1, 2})->Args({3, 4})->Unit(benchmark::kMillisecond);

void BM_VertexSweep(benchmark::State& state) {
  const TetraMetric t = TetraMetric::regular_from_angle(Curvature::Hyperbolic, kPi / 4);
  for (auto _ : state) benchmark::DoNotOptimize(vertex_sweep(t, 0, static_cast<int>(state.range(0)), 4.0));
}
BENCHMARK(BM_VertexSweep)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
