#include <benchmark/benchmark.h>

#include "fave/estimate.h"
#include "fave/rng.h"
#include "fave/sampler.h"
#include "fave/seed.h"
#include "support/fixtures.h"

namespace {

using namespace fave;

Sampler make(int which) {
  auto topo = testing_support::twelve_link_topology(0.01);
  SeedCollection seeds(testing_support::twelve_link_seed_sets());
  switch (which) {
    case 0:
      return Sampler::monte_carlo(topo);
    case 1:
      return Sampler::seed_zv(topo, seeds);
    case 2:
      return Sampler::seed_bre(topo, seeds);
    default:
      return Sampler::seed_vre(topo, seeds);
  }
}

void BM_Draw(benchmark::State& state) {
  auto s = make(static_cast<int>(state.range(0)));
  RngStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.draw(rng));
  state.SetLabel(std::string(to_string(s.kind())));
}
BENCHMARK(BM_Draw)->DenseRange(0, 3);

void BM_Density(benchmark::State& state) {
  auto s = make(static_cast<int>(state.range(0)));
  RngStream rng(2, 0);
  auto x = s.draw(rng).config;
  for (auto _ : state) benchmark::DoNotOptimize(s.log_density(x));
  state.SetLabel(std::string(to_string(s.kind())));
}
BENCHMARK(BM_Density)->DenseRange(0, 3);

void BM_EstimateVre(benchmark::State& state) {
  auto topo = testing_support::twelve_link_topology(0.01);
  SeedCollection seeds(testing_support::twelve_link_seed_sets());
  auto s = Sampler::seed_vre(topo, seeds);
  auto r = span_indicator(seeds);
  EstimateOptions opt;
  opt.samples = 10000;
  opt.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(s, r, 1, opt));
}
BENCHMARK(BM_EstimateVre)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
