#pragma once

// Brute-force reference computations over bitmasks (bit i-1 = link i down).
// Shares no algorithmic code with the library: routing by path/cut enumeration,
// SEED sets by subset scans, sequential densities by direct residual enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace brute {

using Mask = std::uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }

inline double prob(const std::vector<double>& p, Mask x) {
  double v = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) v *= (x >> i & 1) ? p[i] : 1.0 - p[i];
  return v;
}

// Truth table of a failure indicator over all 2^n configurations.
using Table = std::vector<char>;

inline Table tabulate(std::size_t n, const std::function<bool(Mask)>& r) {
  Table t(std::size_t{1} << n);
  for (Mask x = 0; x < t.size(); ++x) t[x] = r(x) ? 1 : 0;
  return t;
}

inline double mu(const std::vector<double>& p, const Table& t) {
  double s = 0.0;
  for (Mask x = 0; x < t.size(); ++x)
    if (t[x]) s += prob(p, x);
  return s;
}

inline bool monotone(const Table& t, std::size_t n) {
  for (Mask x = 0; x < t.size(); ++x) {
    if (!t[x]) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (!t[x | (Mask{1} << i)]) return false;
  }
  return true;
}

// Minimal failing sets as sorted 1-based id lists, sorted by (size, lexicographic).
inline std::vector<std::vector<std::uint32_t>> minimal_sets(const Table& t, std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  for (Mask x = 0; x < t.size(); ++x) {
    if (!t[x]) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < n && minimal; ++i)
      if ((x >> i & 1) && t[x & ~(Mask{1} << i)]) minimal = false;
    if (!minimal) continue;
    std::vector<std::uint32_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (x >> i & 1) s.push_back(static_cast<std::uint32_t>(i + 1));
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

inline Table span_table(std::size_t n, const std::vector<std::vector<std::uint32_t>>& sets) {
  std::vector<Mask> masks;
  for (const auto& s : sets) {
    Mask m = 0;
    for (auto id : s) m |= Mask{1} << (id - 1);
    masks.push_back(m);
  }
  return tabulate(n, [&](Mask x) {
    return std::any_of(masks.begin(), masks.end(), [&](Mask m) { return (x & m) == m; });
  });
}

// ---- sequential sampler densities -------------------------------------------------

enum class Rule { kZv, kBre, kVre };

// Residual minimal failing sets over the free links given down-set `d`, `free` mask.
inline std::vector<Mask> residual_minimal(const Table& t, Mask d, Mask free) {
  std::vector<Mask> out;
  for (Mask y = free;; y = (y - 1) & free) {
    if (t[d | y]) {
      bool minimal = true;
      for (Mask rest = y; rest && minimal; rest &= rest - 1) {
        const Mask bit = rest & (~rest + 1);
        if (t[d | (y & ~bit)]) minimal = false;
      }
      if (minimal) out.push_back(y);
    }
    if (y == 0) break;
  }
  return out;
}

inline double rule_estimate(Rule rule, const std::vector<double>& p, const Table& t, Mask d, Mask free) {
  if (rule == Rule::kZv) {
    // exact conditional failure probability over the free links
    double s = 0.0;
    for (Mask y = free;; y = (y - 1) & free) {
      if (t[d | y]) {
        double w = 1.0;
        for (std::size_t i = 0; i < p.size(); ++i)
          if (free >> i & 1) w *= (y >> i & 1) ? p[i] : 1.0 - p[i];
        s += w;
      }
      if (y == 0) break;
    }
    return s;
  }
  const auto sets = residual_minimal(t, d, free);
  auto phi = [&](Mask m) {
    double v = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (m >> i & 1) v *= p[i];
    return v;
  };
  double acc = 0.0;
  for (Mask m : sets) acc = rule == Rule::kBre ? std::max(acc, phi(m)) : acc + phi(m);
  return std::min(acc, 1.0);
}

// q(x) for every x under the sequential rule targeting the failing region of `t`,
// links sampled in ascending id order.
inline std::vector<double> sequential_distribution(Rule rule, const std::vector<double>& p, const Table& t) {
  const std::size_t n = p.size();
  const Mask all = (n == 64) ? ~Mask{0} : (Mask{1} << n) - 1;
  std::vector<double> q(t.size(), 0.0);
  std::function<void(std::size_t, Mask, double, bool)> rec = [&](std::size_t i, Mask d, double acc, bool from_p) {
    if (acc == 0.0) return;
    if (i == n) {
      q[d] += acc;
      return;
    }
    const Mask bit = Mask{1} << i;
    double q1 = p[i];
    if (!from_p) {
      const Mask free_now = all & ~((bit << 1) - 1);
      const Mask free_here = free_now | bit;  // links i+1..n (0-based i..n-1)
      const bool impossible = !t[d | free_here];
      const bool certain = t[d] != 0;
      if (impossible || certain) {
        from_p = true;
      } else {
        const double a = rule_estimate(rule, p, t, d | bit, free_now) * p[i];
        const double b = rule_estimate(rule, p, t, d, free_now) * (1.0 - p[i]);
        if (a + b > 0.0) {
          q1 = a / (a + b);
        } else {
          from_p = true;  // no branch can fail any more
        }
      }
    }
    rec(i + 1, d | bit, acc * q1, from_p);
    rec(i + 1, d, acc * (1.0 - q1), from_p);
  };
  rec(0, 0, 1.0, false);
  return q;
}

inline std::vector<double> optimal_distribution(const std::vector<double>& p, const Table& t) {
  const double m = mu(p, t);
  std::vector<double> q(t.size(), 0.0);
  for (Mask x = 0; x < t.size(); ++x)
    if (t[x]) q[x] = prob(p, x) / m;
  return q;
}

inline std::vector<double> product_distribution(const std::vector<double>& marg, std::size_t n) {
  std::vector<double> q(std::size_t{1} << n);
  for (Mask x = 0; x < q.size(); ++x) q[x] = prob(marg, x);
  return q;
}

inline std::vector<double> marginals(const std::vector<double>& p, const Table& t) {
  const double m = mu(p, t);
  std::vector<double> out(p.size(), 0.0);
  for (Mask x = 0; x < t.size(); ++x) {
    if (!t[x]) continue;
    const double w = prob(p, x);
    for (std::size_t i = 0; i < p.size(); ++i)
      if (x >> i & 1) out[i] += w;
  }
  for (auto& v : out) v /= m;
  return out;
}

// Sum_x q(x) (R(x) p(x)/q(x))^2 - mu^2 over the support of q.
inline double one_run_variance(const std::vector<double>& p, const Table& t, const std::vector<double>& q) {
  const double m = mu(p, t);
  double s = 0.0;
  for (Mask x = 0; x < t.size(); ++x) {
    if (!t[x] || q[x] == 0.0) continue;
    const double w = prob(p, x) / q[x];
    s += q[x] * (w - m) * (w - m);
  }
  // configurations R=1 with q=0 would make the estimator biased; callers check support
  double miss = 0.0;
  for (Mask x = 0; x < t.size(); ++x)
    if (q[x] > 0.0 && !t[x]) miss += q[x];
  return s + miss * m * m;
}

// ---- routing -----------------------------------------------------------------------

struct Edge {
  int src, dst;
  double cap;  // +inf allowed
};

struct Net {
  int nodes = 0;
  std::vector<Edge> edges;  // edge k is link k+1
};

// Reachability by repeated relaxation.
inline bool reach(const Net& g, Mask down, int s, int t) {
  std::vector<char> seen(g.nodes, 0);
  seen[s] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (down >> k & 1) continue;
      if (seen[g.edges[k].src] && !seen[g.edges[k].dst]) seen[g.edges[k].dst] = changed = true;
    }
  }
  return seen[t];
}

// Max-flow as the minimum s-t cut over node bipartitions.
inline double min_cut(const Net& g, Mask down, int s, int t) {
  double best = std::numeric_limits<double>::infinity();
  for (Mask side = 0; side < (Mask{1} << g.nodes); ++side) {
    if (!(side >> s & 1) || (side >> t & 1)) continue;
    double cut = 0.0;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (down >> k & 1) continue;
      const auto& e = g.edges[k];
      if ((side >> e.src & 1) && !(side >> e.dst & 1)) cut += e.cap;
    }
    best = std::min(best, cut);
  }
  return best;
}

// Shortest path key: (hop count, node sequence, link-id sequence), by exhaustive DFS.
inline std::vector<int> shortest_path(const Net& g, Mask down, int s, int t) {
  std::vector<int> best_links, best_nodes;
  bool found = false;
  std::vector<int> links, nodes{s};
  std::vector<char> on(g.nodes, 0);
  on[s] = 1;
  std::function<void(int)> dfs = [&](int u) {
    if (u == t) {
      const bool better = !found || links.size() < best_links.size() ||
                          (links.size() == best_links.size() &&
                           (nodes < best_nodes || (nodes == best_nodes && links < best_links)));
      if (better) {
        best_links = links;
        best_nodes = nodes;
        found = true;
      }
      return;
    }
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if ((down >> k & 1) || g.edges[k].src != u || on[g.edges[k].dst]) continue;
      on[g.edges[k].dst] = 1;
      links.push_back(static_cast<int>(k));
      nodes.push_back(g.edges[k].dst);
      dfs(g.edges[k].dst);
      nodes.pop_back();
      links.pop_back();
      on[g.edges[k].dst] = 0;
    }
  };
  dfs(s);
  return best_links;  // empty when disconnected (s != t)
}

struct Demand {
  int src, dst;
  double demand;
};

// Water-filling on fixed paths: raise all active flows in small exact rounds.
inline std::vector<double> maxmin(const Net& g, Mask down, const std::vector<Demand>& flows) {
  const std::size_t nf = flows.size();
  std::vector<std::vector<int>> path(nf);
  std::vector<double> grant(nf, 0.0);
  std::vector<char> active(nf, 0);
  for (std::size_t f = 0; f < nf; ++f) {
    path[f] = shortest_path(g, down, flows[f].src, flows[f].dst);
    active[f] = !path[f].empty() && flows[f].demand > 0.0;
  }
  std::vector<double> residual(g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) residual[k] = g.edges[k].cap;
  while (std::any_of(active.begin(), active.end(), [](char a) { return a; })) {
    double step = std::numeric_limits<double>::infinity();
    std::vector<int> users(g.edges.size(), 0);
    for (std::size_t f = 0; f < nf; ++f) {
      if (!active[f]) continue;
      step = std::min(step, flows[f].demand - grant[f]);
      for (int k : path[f]) ++users[k];
    }
    for (std::size_t k = 0; k < g.edges.size(); ++k)
      if (users[k] > 0) step = std::min(step, residual[k] / users[k]);
    if (!std::isfinite(step)) break;
    for (std::size_t f = 0; f < nf; ++f) {
      if (!active[f]) continue;
      grant[f] += step;
      for (int k : path[f]) residual[k] -= step;
    }
    for (std::size_t f = 0; f < nf; ++f) {
      if (!active[f]) continue;
      bool stop = grant[f] >= flows[f].demand - 1e-12 * std::max(1.0, flows[f].demand);
      for (int k : path[f])
        if (residual[k] <= 1e-12 * std::max(1.0, g.edges[k].cap == INFINITY ? 1.0 : g.edges[k].cap)) stop = true;
      if (stop) active[f] = 0;
    }
  }
  return grant;
}

enum class Policy { kMaxMin, kMaxFlow, kConnectivity };

inline bool flow_fails(const Net& g, Mask down, const std::vector<Demand>& flows, std::size_t f, Policy policy) {
  const auto& fl = flows[f];
  switch (policy) {
    case Policy::kConnectivity:
      return !reach(g, down, fl.src, fl.dst);
    case Policy::kMaxFlow:
      return min_cut(g, down, fl.src, fl.dst) < fl.demand - 1e-9 * std::max(1.0, fl.demand);
    case Policy::kMaxMin: {
      const auto grant = maxmin(g, down, flows);
      return grant[f] < fl.demand - 1e-9 * std::max(1.0, fl.demand);
    }
  }
  return true;
}

}  // namespace brute
