#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "brute.h"
#include "fave/routing.h"
#include "fave/topology.h"

namespace testing_support {

struct Instance {
  fave::Topology topo;
  fave::FlowSet flows;
  fave::RoutingPolicy policy = fave::RoutingPolicy::kMaxFlow;
  brute::Net net;
  std::vector<brute::Demand> demands;
  std::vector<double> p;
  std::vector<brute::Table> tables;  // per flow, from the brute routing oracle
};

inline brute::Policy to_brute(fave::RoutingPolicy policy) {
  switch (policy) {
    case fave::RoutingPolicy::kShortestPathMaxMin:
      return brute::Policy::kMaxMin;
    case fave::RoutingPolicy::kMaxFlow:
      return brute::Policy::kMaxFlow;
    case fave::RoutingPolicy::kConnectivity:
      return brute::Policy::kConnectivity;
  }
  return brute::Policy::kConnectivity;
}

struct InstanceShape {
  std::size_t min_links = 4;
  std::size_t max_links = 10;
  std::size_t max_flows = 1;
  double p_lo = 0.01;
  double p_hi = 0.3;
};

// Random small multigraph + flows whose failure indicators (by the brute oracle)
// are monotone and not identically zero. Max-flow policy is only used for
// single-flow instances. Retries until an acceptable instance appears.
inline Instance random_instance(std::uint64_t seed, const InstanceShape& shape = {}) {
  std::mt19937_64 gen(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
  };
  for (;;) {
    Instance inst;
    const int n_nodes = static_cast<int>(pick(3, 5));
    const std::size_t n_links = pick(shape.min_links, shape.max_links);
    const std::size_t n_flows = pick(1, shape.max_flows);
    const int kind = static_cast<int>(pick(0, 2));
    inst.policy = kind == 0   ? fave::RoutingPolicy::kConnectivity
                  : kind == 1 ? fave::RoutingPolicy::kShortestPathMaxMin
                              : fave::RoutingPolicy::kMaxFlow;
    if (n_flows > 1 && inst.policy == fave::RoutingPolicy::kMaxFlow)
      inst.policy = fave::RoutingPolicy::kShortestPathMaxMin;

    std::vector<std::string> names;
    for (int v = 0; v < n_nodes; ++v) names.push_back(std::string(1, static_cast<char>('A' + v)));
    inst.net.nodes = n_nodes;
    std::vector<fave::LinkSpec> specs;
    for (std::size_t k = 0; k < n_links; ++k) {
      const int s = static_cast<int>(pick(0, n_nodes - 1));
      int d = static_cast<int>(pick(0, n_nodes - 2));
      if (d >= s) ++d;
      const double p = uni(shape.p_lo, shape.p_hi);
      const double c = static_cast<double>(5 * pick(1, 4));
      const bool inf = inst.policy == fave::RoutingPolicy::kConnectivity && pick(0, 1) == 0;
      specs.push_back({static_cast<fave::LinkId>(k + 1), names[s], names[d], p,
                       inf ? fave::Capacity::infinite() : fave::Capacity(c)});
      inst.net.edges.push_back({s, d, inf ? INFINITY : c});
      inst.p.push_back(p);
    }
    std::vector<fave::Flow> flows;
    for (std::size_t f = 0; f < n_flows; ++f) {
      const int s = static_cast<int>(pick(0, n_nodes - 1));
      int d = static_cast<int>(pick(0, n_nodes - 2));
      if (d >= s) ++d;
      const double demand = static_cast<double>(pick(1, 4)) * 2.5;
      flows.push_back({static_cast<fave::FlowId>(f + 1), names[s], names[d], demand, 0.9});
      inst.demands.push_back({s, d, demand});
    }
    inst.topo = fave::Topology(names, specs);
    inst.flows = fave::FlowSet(flows);

    bool ok = true;
    const auto bp = to_brute(inst.policy);
    for (std::size_t f = 0; f < n_flows && ok; ++f) {
      auto t = brute::tabulate(n_links, [&](brute::Mask x) { return brute::flow_fails(inst.net, x, inst.demands, f, bp); });
      // all-up failing flows make the problem trivial; require a proper rare event
      ok = !t[0] && brute::monotone(t, n_links);
      inst.tables.push_back(std::move(t));
    }
    if (ok) return inst;
  }
}

inline fave::FailureConfig config_of(brute::Mask x, std::size_t n) { return fave::FailureConfig::from_mask(x, n); }

}  // namespace testing_support
