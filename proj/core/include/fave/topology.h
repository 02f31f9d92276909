#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fave/failure_config.h"
#include "fave/link_set.h"

namespace fave {

// Link capacity in bandwidth units. "Infinite" is a distinct state, not a
// large number, so connectivity reductions stay exact.
class Capacity {
 public:
  Capacity() = default;
  explicit Capacity(double units);
  static Capacity infinite() {
    Capacity c;
    c.infinite_ = true;
    return c;
  }

  bool is_infinite() const { return infinite_; }
  // +inf for infinite capacities.
  double value() const;

  bool operator==(const Capacity&) const = default;

 private:
  double units_ = 0.0;
  bool infinite_ = false;
};

using NodeIndex = std::size_t;

struct Link {
  LinkId id = 0;
  NodeIndex src = 0;
  NodeIndex dst = 0;
  double p = 0.0;  // failure probability
  Capacity capacity;
};

// Link description by node name, used to build a Topology.
struct LinkSpec {
  LinkId id = 0;
  std::string src;
  std::string dst;
  double p = 0.0;
  Capacity capacity;
};

// Directed multigraph with per-link failure probability and capacity.
// Immutable after construction.
class Topology {
 public:
  Topology() = default;
  // Link ids must be exactly 1..links.size() in any order; endpoints must be
  // declared nodes. Throws InvalidArgument / InvalidLinkId otherwise.
  Topology(std::vector<std::string> nodes, std::vector<LinkSpec> links);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const;
  const std::string& node_name(NodeIndex n) const { return nodes_.at(n); }
  std::optional<NodeIndex> find_node(const std::string& name) const;
  NodeIndex node(const std::string& name) const;  // throws if unknown
  std::span<const LinkId> out_links(NodeIndex n) const { return out_[n]; }
  std::span<const LinkId> in_links(NodeIndex n) const { return in_[n]; }

  std::vector<LinkSpec> link_specs() const;

  // Copy with link `id`'s failure probability / capacity replaced.
  Topology with_failure_probability(LinkId id, double p) const;
  Topology with_capacity(LinkId id, Capacity c) const;
  // Copy with extra links appended (ids N_l+1, N_l+2, ...).
  Topology with_added_links(const std::vector<LinkSpec>& extra) const;

 private:
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<Link> links_;  // links_[id-1]
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<LinkId>> in_;
};

// x with x_i = 1 iff i in L. Throws InvalidLinkId for members outside 1..n.
FailureConfig psi(const LinkSet& links, std::size_t n_links);
// {i : x_i = 1}
LinkSet psi_inv(const FailureConfig& x);
// Probability that every link in L fails; 1 for the empty set.
double phi(const LinkSet& links, const Topology& topo);
// p(x) = prod_i p_i^{x_i} (1 - p_i)^{1 - x_i}
double config_prob(const FailureConfig& x, const Topology& topo);
double log_config_prob(const FailureConfig& x, const Topology& topo);
// log p_i(x_i) for a single link
double log_link_prob(const Link& link, bool down);
// True iff some member of `coll` is a subset of L.
bool in_span(const LinkSet& links, std::span<const LinkSet> coll);

}  // namespace fave
