#include "kltq/diagquot.hpp"
#include "kltq/pdiv.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace kltq;

IntMat random_matrix(std::mt19937_64& g, int rows, int cols, long span) {
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m.at(i, j) = static_cast<long>(g() % (2 * span + 1)) - span;
  return m;
}

void bm_hermite(benchmark::State& state) {
  std::mt19937_64 g(7);
  IntMat m = random_matrix(g, static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(0)) + 2, 50);
  for (auto _ : state) benchmark::DoNotOptimize(hermite_normal_form(m));
}
BENCHMARK(bm_hermite)->Arg(4)->Arg(6)->Arg(8);

void bm_smith(benchmark::State& state) {
  std::mt19937_64 g(11);
  IntMat m = random_matrix(g, static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(0)), 50);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(bm_smith)->Arg(4)->Arg(6);

void bm_dual_cone(benchmark::State& state) {
  std::mt19937_64 g(13);
  const int dim = static_cast<int>(state.range(0));
  std::vector<IntVec> rays;
  while (static_cast<int>(rays.size()) < dim + 3) {
    IntMat m = random_matrix(g, 1, dim, 5);
    IntVec v = m.row(0);
    if (!is_zero(v)) rays.push_back(primitivize_ray(v));
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(Cone::from_rays(dim, rays));
}
BENCHMARK(bm_dual_cone)->Arg(3)->Arg(4)->Arg(5);

void bm_hilbert_basis(benchmark::State& state) {
  const long k = state.range(0);
  Cone c = Cone::from_rays(2, {{Int(1), Int(0)}, {Int(1), Int(k)}});
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_basis(c));
}
BENCHMARK(bm_hilbert_basis)->Arg(5)->Arg(25)->Arg(100);

void bm_klt_certificate(benchmark::State& state) {
  ToricAffine x = ToricAffine::make(
      3, {{Int(0), Int(0), Int(1)},
          {Int(0), Int(1), Int(2)},
          {Int(1), Int(0), Int(1)},
          {Int(1), Int(1), Int(1)}});
  for (auto _ : state)
    benchmark::DoNotOptimize(klt_type_certificate(x, std::nullopt));
}
BENCHMARK(bm_klt_certificate);

void bm_quotient_presentation(benchmark::State& state) {
  WeightAction a;
  a.n = 4;
  a.torus_weights = IntMat::from_rows({{Int(2), Int(-1), Int(-1), Int(1)}}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(quotient_presentation(a));
}
BENCHMARK(bm_quotient_presentation);

}  // namespace

BENCHMARK_MAIN();
