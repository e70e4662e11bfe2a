#include <benchmark/benchmark.h>

#include "osculant/curvature.hpp"
#include "osculant/gallery.hpp"

using namespace osculant;

static void JetMultiply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  Jet a = Jet::constant(1.3, n, order);
  Jet b = Jet::constant(0.7, n, order);
  for (int v = 0; v < n; ++v) {
    a = a * Jet::variable(v, 0.2, n, order) + Jet::constant(0.1, n, order);
    b = b + Jet::variable(v, -0.4, n, order) * Jet::constant(1.7, n, order);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(JetMultiply)->Args({2, 3})->Args({2, 6})->Args({3, 4})->Args({4, 6});

static void JetEvaluateTorus(benchmark::State& state) {
  const Immersion& torus = builtin_gallery()[5].spec.immersion;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_jet(torus, {0.3, -0.8}, 3));
  }
}
BENCHMARK(JetEvaluateTorus);

static void AnalyzeHelix(benchmark::State& state) {
  const GalleryEntry& helix = builtin_gallery()[3];
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        analyze(helix.spec.immersion, helix.spec.base_point, 2, RankTolerance{}));
  }
}
BENCHMARK(AnalyzeHelix);

static void AnalyzeExtremal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  Immersion im = extremal_example(n, r);
  Vec origin(static_cast<size_t>(n), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(im, origin, r, RankTolerance{}));
  }
}
BENCHMARK(AnalyzeExtremal)->Args({2, 2})->Args({3, 2})->Args({1, 3});

static void OracleDims(benchmark::State& state) {
  Immersion im = random_polynomial_immersion(3, 12, 4, 99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_flag_dims(im, {0.0, 0.0, 0.0}, 3, RankTolerance{}));
  }
}
BENCHMARK(OracleDims);

BENCHMARK_MAIN();
