#include "fave/routing.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <unordered_map>

#include "fave/errors.h"

namespace fave {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

bool satisfied(double granted, double demand) {
  return granted >= demand - kEps * std::max(1.0, demand);
}

// Dinic's algorithm over a residual graph with capacities of type T.
template <typename T>
class Dinic {
 public:
  explicit Dinic(std::size_t n) : adj_(n), level_(n), it_(n) {}

  void add_edge(std::size_t u, std::size_t v, T cap) {
    adj_[u].push_back(edges_.size());
    edges_.push_back({v, cap});
    adj_[v].push_back(edges_.size());
    edges_.push_back({u, T{}});
  }

  T run(std::size_t s, std::size_t t) {
    T total{};
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        T pushed = dfs(s, t, std::numeric_limits<T>::max());
        if (!(pushed > T{})) break;
        total += pushed;
      }
    }
    return total;
  }

 private:
  struct Edge {
    std::size_t to;
    T cap;
  };

  static bool positive(T c) {
    if constexpr (std::is_floating_point_v<T>)
      return c > kEps;
    else
      return c > 0;
  }

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::size_t> q{s};
    level_[s] = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (auto e : adj_[u]) {
        const auto& edge = edges_[e];
        if (positive(edge.cap) && level_[edge.to] < 0) {
          level_[edge.to] = level_[u] + 1;
          q.push_back(edge.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  T dfs(std::size_t u, std::size_t t, T limit) {
    if (u == t) return limit;
    for (; it_[u] < adj_[u].size(); ++it_[u]) {
      auto e = adj_[u][it_[u]];
      auto& edge = edges_[e];
      if (!positive(edge.cap) || level_[edge.to] != level_[u] + 1) continue;
      T got = dfs(edge.to, t, std::min(limit, edge.cap));
      if (got > T{}) {
        edge.cap -= got;
        edges_[e ^ 1].cap += got;
        return got;
      }
    }
    return T{};
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

bool reachable(const Topology& topo, const FailureConfig& x, NodeIndex src, NodeIndex dst,
               bool infinite_only) {
  if (src == dst) return true;
  std::vector<char> seen(topo.node_count(), 0);
  std::vector<NodeIndex> stack{src};
  seen[src] = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (LinkId id : topo.out_links(u)) {
      if (x.is_down(id)) continue;
      const auto& l = topo.link(id);
      if (infinite_only && !l.capacity.is_infinite()) continue;
      if (seen[l.dst]) continue;
      if (l.dst == dst) return true;
      seen[l.dst] = 1;
      stack.push_back(l.dst);
    }
  }
  return false;
}

void check_size(const Topology& topo, const FailureConfig& x) {
  if (x.size() != topo.link_count())
    throw InvalidArgument("configuration has " + std::to_string(x.size()) + " links, topology has " +
                          std::to_string(topo.link_count()));
}

}  // namespace

FlowSet::FlowSet(std::vector<Flow> flows) : flows_(std::move(flows)) {
  std::unordered_map<FlowId, std::size_t> seen;
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    const auto& f = flows_[i];
    if (!seen.emplace(f.id, i).second) throw InvalidArgument("duplicate flow id " + std::to_string(f.id));
    if (f.src == f.dst) throw InvalidArgument("flow " + std::to_string(f.id) + ": src equals dst");
    if (!(f.demand >= 0.0) || std::isinf(f.demand))
      throw InvalidArgument("flow " + std::to_string(f.id) + ": demand must be finite and >= 0");
    if (!(f.target >= 0.0 && f.target <= 1.0))
      throw InvalidArgument("flow " + std::to_string(f.id) + ": target outside [0,1]");
  }
}

std::size_t FlowSet::index_of(FlowId id) const {
  for (std::size_t i = 0; i < flows_.size(); ++i)
    if (flows_[i].id == id) return i;
  throw InvalidArgument("unknown flow id " + std::to_string(id));
}

std::string_view to_string(RoutingPolicy policy) {
  switch (policy) {
    case RoutingPolicy::kShortestPathMaxMin:
      return "shortest-path-maxmin";
    case RoutingPolicy::kMaxFlow:
      return "max-flow";
    case RoutingPolicy::kConnectivity:
      return "connectivity";
  }
  return "?";
}

RoutingPolicy parse_routing_policy(std::string_view name) {
  if (name == "shortest-path-maxmin") return RoutingPolicy::kShortestPathMaxMin;
  if (name == "max-flow") return RoutingPolicy::kMaxFlow;
  if (name == "connectivity") return RoutingPolicy::kConnectivity;
  throw InvalidArgument("unknown routing policy '" + std::string(name) + "'");
}

std::optional<std::vector<LinkId>> shortest_path(const Topology& topo, const FailureConfig& x,
                                                 NodeIndex src, NodeIndex dst) {
  check_size(topo, x);
  if (src == dst) return std::vector<LinkId>{};
  // Hop distance to dst over surviving links.
  constexpr int kUnreached = -1;
  std::vector<int> dist(topo.node_count(), kUnreached);
  std::deque<NodeIndex> queue{dst};
  dist[dst] = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (LinkId id : topo.in_links(v)) {
      if (x.is_down(id)) continue;
      auto u = topo.link(id).src;
      if (dist[u] == kUnreached) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  if (dist[src] == kUnreached) return std::nullopt;

  std::vector<LinkId> path;
  for (NodeIndex u = src; u != dst;) {
    LinkId best = 0;
    NodeIndex best_next = 0;
    for (LinkId id : topo.out_links(u)) {
      if (x.is_down(id)) continue;
      const auto& l = topo.link(id);
      if (dist[l.dst] != dist[u] - 1) continue;
      if (best == 0 || l.dst < best_next || (l.dst == best_next && id < best)) {
        best = id;
        best_next = l.dst;
      }
    }
    path.push_back(best);
    u = best_next;
  }
  return path;
}

Allocation route_maxmin(const Topology& topo, const FailureConfig& x, const FlowSet& flows) {
  check_size(topo, x);
  const std::size_t nf = flows.size();
  Allocation alloc;
  alloc.granted.assign(nf, 0.0);
  alloc.load.assign(topo.link_count(), 0.0);
  alloc.paths.resize(nf);

  std::vector<char> active(nf, 0);
  for (std::size_t f = 0; f < nf; ++f) {
    auto path = shortest_path(topo, x, topo.node(flows[f].src), topo.node(flows[f].dst));
    if (!path) continue;
    alloc.paths[f] = std::move(*path);
    active[f] = flows[f].demand > 0.0;
  }

  std::vector<double> residual(topo.link_count());
  for (const auto& l : topo.links()) residual[l.id - 1] = l.capacity.value();
  std::vector<int> users(topo.link_count());

  // Progressive filling: raise all active grants at the same rate until a
  // link saturates or a demand is met. Each round freezes at least one flow.
  for (std::size_t round = 0; round <= nf; ++round) {
    std::fill(users.begin(), users.end(), 0);
    bool any = false;
    double step = kInf;
    for (std::size_t f = 0; f < nf; ++f) {
      if (!active[f]) continue;
      any = true;
      step = std::min(step, flows[f].demand - alloc.granted[f]);
      for (LinkId id : alloc.paths[f]) ++users[id - 1];
    }
    if (!any) break;
    for (std::size_t k = 0; k < users.size(); ++k)
      if (users[k] > 0 && std::isfinite(residual[k])) step = std::min(step, residual[k] / users[k]);
    step = std::max(step, 0.0);

    for (std::size_t f = 0; f < nf; ++f) {
      if (!active[f]) continue;
      alloc.granted[f] += step;
      for (LinkId id : alloc.paths[f]) residual[id - 1] -= step;
    }
    for (std::size_t f = 0; f < nf; ++f) {
      if (!active[f]) continue;
      if (alloc.granted[f] >= flows[f].demand - kEps) {
        alloc.granted[f] = flows[f].demand;
        active[f] = 0;
        continue;
      }
      for (LinkId id : alloc.paths[f]) {
        if (residual[id - 1] <= kEps) {
          active[f] = 0;
          break;
        }
      }
    }
  }

  for (std::size_t f = 0; f < nf; ++f)
    for (LinkId id : alloc.paths[f]) alloc.load[id - 1] += alloc.granted[f];
  return alloc;
}

double max_flow(const Topology& topo, const FailureConfig& x, NodeIndex src, NodeIndex dst) {
  check_size(topo, x);
  if (src == dst) throw InvalidArgument("max_flow: source equals sink (degenerate, value +inf)");
  if (reachable(topo, x, src, dst, /*infinite_only=*/true)) return kInf;

  // Any finite cut is bounded by the sum of finite capacities, so infinite
  // links can stand in as that sum plus one.
  double finite_sum = 0.0;
  bool integral = true;
  for (const auto& l : topo.links()) {
    if (x.is_down(l.id) || l.capacity.is_infinite()) continue;
    finite_sum += l.capacity.value();
    integral = integral && std::floor(l.capacity.value()) == l.capacity.value();
  }
  const double big = finite_sum + 1.0;
  integral = integral && big < 9.0e15;

  if (integral) {
    Dinic<long long> dinic(topo.node_count());
    for (const auto& l : topo.links()) {
      if (x.is_down(l.id)) continue;
      double c = l.capacity.is_infinite() ? big : l.capacity.value();
      dinic.add_edge(l.src, l.dst, static_cast<long long>(c));
    }
    return static_cast<double>(dinic.run(src, dst));
  }
  Dinic<double> dinic(topo.node_count());
  for (const auto& l : topo.links()) {
    if (x.is_down(l.id)) continue;
    dinic.add_edge(l.src, l.dst, l.capacity.is_infinite() ? big : l.capacity.value());
  }
  return dinic.run(src, dst);
}

bool connected(const Topology& topo, const FailureConfig& x, NodeIndex src, NodeIndex dst) {
  check_size(topo, x);
  return reachable(topo, x, src, dst, /*infinite_only=*/false);
}

bool evaluate(const Topology& topo, const FailureConfig& x, const FlowSet& flows,
              RoutingPolicy policy, FlowId flow_id) {
  const std::size_t index = flows.index_of(flow_id);
  const Flow& f = flows[index];
  switch (policy) {
    case RoutingPolicy::kConnectivity:
      return !connected(topo, x, topo.node(f.src), topo.node(f.dst));
    case RoutingPolicy::kMaxFlow:
      return !satisfied(max_flow(topo, x, topo.node(f.src), topo.node(f.dst)), f.demand);
    case RoutingPolicy::kShortestPathMaxMin: {
      auto alloc = route_maxmin(topo, x, flows);
      return !satisfied(alloc.granted[index], f.demand);
    }
  }
  return false;
}

std::vector<char> evaluate_all(const Topology& topo, const FailureConfig& x, const FlowSet& flows,
                               RoutingPolicy policy) {
  std::vector<char> out(flows.size(), 0);
  if (policy == RoutingPolicy::kShortestPathMaxMin) {
    auto alloc = route_maxmin(topo, x, flows);
    for (std::size_t f = 0; f < flows.size(); ++f)
      out[f] = !satisfied(alloc.granted[f], flows[f].demand);
    return out;
  }
  for (std::size_t f = 0; f < flows.size(); ++f) out[f] = evaluate(topo, x, flows, policy, flows[f].id);
  return out;
}

Indicator flow_indicator(Topology topo, FlowSet flows, RoutingPolicy policy, FlowId flow_id) {
  flows.index_of(flow_id);
  auto ctx = std::make_shared<std::tuple<Topology, FlowSet>>(std::move(topo), std::move(flows));
  return [ctx, policy, flow_id](const FailureConfig& x) {
    return evaluate(std::get<0>(*ctx), x, std::get<1>(*ctx), policy, flow_id);
  };
}

std::optional<MonotonicityViolation> find_monotonicity_violation(const Indicator& r,
                                                                 std::size_t n_links) {
  if (n_links > 30) throw LimitExceeded("monotonicity check limited to 30 links");
  const std::uint64_t total = 1ull << n_links;
  std::vector<char> fails(total);
  for (std::uint64_t m = 0; m < total; ++m) fails[m] = r(FailureConfig::from_mask(m, n_links));
  // Upward closure follows from closure under single-link additions.
  for (std::uint64_t m = 0; m < total; ++m) {
    if (!fails[m]) continue;
    for (std::size_t k = 0; k < n_links; ++k) {
      const std::uint64_t up = m | (1ull << k);
      if (up != m && !fails[up])
        return MonotonicityViolation{psi_inv(FailureConfig::from_mask(m, n_links)),
                                     psi_inv(FailureConfig::from_mask(up, n_links))};
    }
  }
  return std::nullopt;
}

}  // namespace fave
