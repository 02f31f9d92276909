#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fave/failure_config.h"
#include "fave/topology.h"

namespace fave {

using FlowId = std::uint32_t;

struct Flow {
  FlowId id = 0;
  std::string src;
  std::string dst;
  double demand = 0.0;  // bandwidth units
  double target = 0.0;  // availability target in [0,1]
};

// Ordered collection of flows with unique ids.
class FlowSet {
 public:
  FlowSet() = default;
  explicit FlowSet(std::vector<Flow> flows);

  std::size_t size() const { return flows_.size(); }
  bool empty() const { return flows_.empty(); }
  const std::vector<Flow>& flows() const { return flows_; }
  const Flow& operator[](std::size_t index) const { return flows_[index]; }
  // Position of flow `id`; throws InvalidArgument for unknown ids.
  std::size_t index_of(FlowId id) const;
  const Flow& by_id(FlowId id) const { return flows_[index_of(id)]; }
  auto begin() const { return flows_.begin(); }
  auto end() const { return flows_.end(); }

 private:
  std::vector<Flow> flows_;
};

enum class RoutingPolicy {
  kShortestPathMaxMin,  // single shortest surviving path, max-min fair shares
  kMaxFlow,             // per-flow max-flow must cover the demand
  kConnectivity,        // flow fails iff src cannot reach dst
};

std::string_view to_string(RoutingPolicy policy);
RoutingPolicy parse_routing_policy(std::string_view name);

struct Allocation {
  std::vector<double> granted;              // per flow, in FlowSet order
  std::vector<double> load;                 // per link, index id-1
  std::vector<std::vector<LinkId>> paths;   // empty when disconnected
};

// Minimum-hop path over surviving links; ties broken by the smallest node
// sequence (node declaration order), then by smallest link id for parallel
// links. nullopt when dst is unreachable. src == dst yields an empty path.
std::optional<std::vector<LinkId>> shortest_path(const Topology& topo, const FailureConfig& x,
                                                 NodeIndex src, NodeIndex dst);

Allocation route_maxmin(const Topology& topo, const FailureConfig& x, const FlowSet& flows);

// Max-flow value over surviving links; +inf when an all-infinite-capacity
// path exists. Throws InvalidArgument when src == dst.
double max_flow(const Topology& topo, const FailureConfig& x, NodeIndex src, NodeIndex dst);

bool connected(const Topology& topo, const FailureConfig& x, NodeIndex src, NodeIndex dst);

// R(x) for one flow: true when the flow's demand is unsatisfied.
bool evaluate(const Topology& topo, const FailureConfig& x, const FlowSet& flows,
              RoutingPolicy policy, FlowId flow_id);
// R(x) for every flow in FlowSet order, sharing one routing computation.
std::vector<char> evaluate_all(const Topology& topo, const FailureConfig& x, const FlowSet& flows,
                               RoutingPolicy policy);

// Binary indicator of the event of interest.
using Indicator = std::function<bool(const FailureConfig&)>;

Indicator flow_indicator(Topology topo, FlowSet flows, RoutingPolicy policy, FlowId flow_id);

// Exhaustively checks that R is monotone in the failure set: R(x)=1 implies
// R(x')=1 for every x' with a superset of failures. Returns a witness pair
// (failing set, succeeding superset) on violation. Requires n_links <= 30.
struct MonotonicityViolation {
  LinkSet failing;
  LinkSet succeeding_superset;
};
std::optional<MonotonicityViolation> find_monotonicity_violation(const Indicator& r,
                                                                 std::size_t n_links);

}  // namespace fave
