#include <random>

#include <benchmark/benchmark.h>

#include "obd/algorithms.hpp"
#include "obd/instance.hpp"
#include "obd/offline.hpp"
#include "obd/projection.hpp"

using namespace obd;

namespace {

std::vector<CostFunction> instance(CostFamily family, int d, int T) {
  InstanceSpec spec;
  spec.d = d;
  spec.T = T;
  spec.family = family;
  spec.seed = 1;
  return generate_instance(spec);
}

void BM_ProjectSublevelQuadratic(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CostFunction f = instance(CostFamily::kQuadratic, d, 1)[0];
  const Vector x_prev = Vector::Constant(d, 20.0);
  const double level = 0.5 * f(x_prev);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_sublevel(MirrorMap::euclidean(), f, level, x_prev, FeasibleSet::whole_space(d)));
  }
}
BENCHMARK(BM_ProjectSublevelQuadratic)->Arg(2)->Arg(8)->Arg(32);

void BM_ProjectSimplexEntropy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  Vector x(d);
  for (int i = 0; i < d; ++i) x(i) = u(rng);
  const FeasibleSet s = FeasibleSet::simplex(d, 0.1 / d);
  const MirrorMap map = MirrorMap::negative_entropy(0.1 / d);
  for (auto _ : state) benchmark::DoNotOptimize(project_set(map, s, x));
}
BENCHMARK(BM_ProjectSimplexEntropy)->Arg(8)->Arg(64);

void BM_PrimalStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto fam = state.range(1) == 0 ? CostFamily::kQuadratic : CostFamily::kNormTracking;
  const CostFunction f = instance(fam, d, 1)[0];
  const Vector x_prev = Vector::Constant(d, 10.0);
  PrimalConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(primal_obd_step(x_prev, f, cfg));
}
BENCHMARK(BM_PrimalStep)->Args({4, 0})->Args({32, 0})->Args({4, 1})->Args({32, 1});

void BM_DualStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CostFunction f = instance(CostFamily::kQuadratic, d, 1)[0];
  const Vector x_prev = Vector::Constant(d, 10.0);
  DualConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(dual_obd_step(x_prev, f, cfg));
}
BENCHMARK(BM_DualStep)->Arg(4)->Arg(32);

void BM_OfflineOpt(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int T = static_cast<int>(state.range(1));
  const auto fam = state.range(2) == 0 ? CostFamily::kQuadratic : CostFamily::kNormTracking;
  const auto fs = instance(fam, d, T);
  for (auto _ : state) {
    benchmark::DoNotOptimize(offline_opt(fs, Vector::Zero(d), FeasibleSet::whole_space(d)));
  }
}
BENCHMARK(BM_OfflineOpt)->Args({4, 50, 0})->Args({4, 50, 1})->Args({16, 50, 1})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
