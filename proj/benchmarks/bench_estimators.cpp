#include <benchmark/benchmark.h>

#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/estimators.hpp"
#include "tailrisk/rng.hpp"

using namespace tailrisk;
namespace fam = tailrisk::family;

namespace {

void BM_RngUniform(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_RngUniform);

void BM_SampleHalfStudentT(benchmark::State& state) {
  auto d = make_family(fam::HalfStudentT{4});
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(d->sample(rng));
}
BENCHMARK(BM_SampleHalfStudentT);

// Replicates per second, single worker, n summands.
void BM_CrudeExponential(benchmark::State& state) {
  auto d = make_family(fam::Exponential{1.0});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(crude_mc(*d, n, 2.0 * n, {10000, 3, 1}));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_CrudeExponential)->Arg(10)->Arg(100);

void BM_TiltedExponential(benchmark::State& state) {
  auto d = make_family(fam::Exponential{1.0});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(is_tilted_mc(*d, n, 3.0, {10000, 4, 1}));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_TiltedExponential)->Arg(10)->Arg(100);

void BM_ConditionalHalfStudentT(benchmark::State& state) {
  auto d = make_family(fam::HalfStudentT{2.5});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cond_mc_ak(*d, n, 50.0 * n, {10000, 5, 1}));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_ConditionalHalfStudentT)->Arg(10)->Arg(100);

}  // namespace
