#include <vector>

#include <benchmark/benchmark.h>

#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/evt.hpp"
#include "tailrisk/gpd.hpp"

using namespace tailrisk;
namespace fam = tailrisk::family;

namespace {

std::vector<double> sample(std::size_t n) {
  auto d = make_family(fam::GeneralizedPareto{0.25});
  Rng rng(7);
  std::vector<double> out(n);
  for (auto& x : out) x = d->sample(rng);
  return out;
}

void BM_MomentSeries(benchmark::State& state) {
  const auto data = sample(static_cast<std::size_t>(state.range(0)));
  const auto ks = k_range(10, data.size() / 5, data.size() / 1000);
  for (auto _ : state) benchmark::DoNotOptimize(moment_series(data, ks));
}
BENCHMARK(BM_MomentSeries)->Arg(10000)->Arg(100000);

void BM_GpdFit(benchmark::State& state) {
  const auto data = sample(10000);
  const auto method = static_cast<GpdMethod>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gpd_fit(data, method));
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_GpdFit)->DenseRange(0, 2);

}  // namespace
