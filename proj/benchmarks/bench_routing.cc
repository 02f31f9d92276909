#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fave/routing.h"

namespace {

using namespace fave;

// Ring of n nodes with a chord every third node; flows between all pairs.
struct Net {
  Topology topo;
  FlowSet flows;
};

Net ring(int n) {
  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
  std::vector<LinkSpec> links;
  auto add = [&](int a, int b) {
    links.push_back({static_cast<LinkId>(links.size() + 1), nodes[a], nodes[b], 0.001, Capacity(1000)});
    links.push_back({static_cast<LinkId>(links.size() + 1), nodes[b], nodes[a], 0.001, Capacity(1000)});
  };
  for (int i = 0; i < n; ++i) add(i, (i + 1) % n);
  for (int i = 0; i + n / 2 < n; i += 3) add(i, i + n / 2);
  std::vector<Flow> flows;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t) flows.push_back({static_cast<FlowId>(flows.size() + 1), nodes[s], nodes[t], 10.0, 0.999});
  return {Topology(nodes, links), FlowSet(flows)};
}

FailureConfig some_failures(const Topology& topo) {
  FailureConfig x(topo.link_count());
  x.set(1, true);
  x.set(5, true);
  return x;
}

void BM_MaxMin(benchmark::State& state) {
  auto net = ring(static_cast<int>(state.range(0)));
  auto x = some_failures(net.topo);
  for (auto _ : state) benchmark::DoNotOptimize(route_maxmin(net.topo, x, net.flows));
  state.counters["flows"] = static_cast<double>(net.flows.size());
}
BENCHMARK(BM_MaxMin)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_MaxFlow(benchmark::State& state) {
  auto net = ring(static_cast<int>(state.range(0)));
  auto x = some_failures(net.topo);
  for (auto _ : state) benchmark::DoNotOptimize(max_flow(net.topo, x, 0, 1));
}
BENCHMARK(BM_MaxFlow)->Arg(6)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

}  // namespace
