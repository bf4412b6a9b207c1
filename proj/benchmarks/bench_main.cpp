#include <benchmark/benchmark.h>

#include "evo/classify2d.hpp"
#include "evo/classify3d.hpp"
#include "evo/dynamics.hpp"
#include "evo/iso.hpp"

namespace {

using namespace evo;

void BM_Classify3Random(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const EvolutionAlgebra a = random_rank1_algebra(seed++ % 1024, 3.0);
    benchmark::DoNotOptimize(classify3(a));
  }
}
BENCHMARK(BM_Classify3Random);

void BM_Classify2E6(benchmark::State& state) {
  const EvolutionAlgebra a = canonical2(Class2::e6(0.7, -1.3));
  for (auto _ : state) benchmark::DoNotOptimize(classify2(a));
}
BENCHMARK(BM_Classify2E6);

void BM_FixedPointsClosedForm(benchmark::State& state) {
  const EvolutionAlgebra a = canonical2(Class2::e6(0.7, -1.3));
  for (auto _ : state) benchmark::DoNotOptimize(fixed_points(a));
}
BENCHMARK(BM_FixedPointsClosedForm);

void BM_FixedPointsMultistart(benchmark::State& state) {
  Matrix m(3, 3);
  m << 1.0, 0.5, -0.2, 0.3, 1.0, 0.4, -0.6, 0.2, 1.0;
  const EvolutionAlgebra a(3, m);
  SolverOptions opts;
  opts.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(multistart_fixed_points(a, opts));
}
BENCHMARK(BM_FixedPointsMultistart)->Arg(32)->Arg(256);

void BM_IsoSearchExhausted(benchmark::State& state) {
  const EvolutionAlgebra a = canonical3(Label3::E4);
  const EvolutionAlgebra b = canonical3(Label3::E5);
  IsoOptions opts;
  opts.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iso_search(a, b, opts));
}
BENCHMARK(BM_IsoSearchExhausted)->Arg(16)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
