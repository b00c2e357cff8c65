#include "ofspline/poisson.hpp"
#include "ofspline/presets.hpp"
#include "ofspline/spectrum.hpp"

#include <benchmark/benchmark.h>

using namespace ofspline;

static void BM_AssembleStiffness(benchmark::State& state) {
  const auto s = make_space(SpaceKind::Optimal, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            BoundaryType::Dirichlet);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(s));
}
BENCHMARK(BM_AssembleStiffness)->Args({3, 100})->Args({5, 100})->Args({5, 400});

static void BM_Spectrum1D(benchmark::State& state) {
  const auto s = make_space(SpaceKind::Optimal, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                            BoundaryType::Dirichlet);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_1d(s));
}
BENCHMARK(BM_Spectrum1D)->Args({3, 50})->Args({3, 200})->Args({5, 200})->Unit(benchmark::kMillisecond);

static void BM_FastDiagonalization(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = make_space(SpaceKind::Optimal, 3, n, BoundaryType::Dirichlet);
  const FastDiagonalization fd(s, s);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Ones(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(fd.solve(b));
}
BENCHMARK(BM_FastDiagonalization)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Poisson2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto s = make_space(SpaceKind::Optimal, 4, n, BoundaryType::Dirichlet);
  const auto prob = preset_2d("ex75");
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson_2d(s, s, prob, true));
}
BENCHMARK(BM_Poisson2D)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
