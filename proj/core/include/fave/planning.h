#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fave/estimate.h"
#include "fave/routing.h"
#include "fave/sampler.h"
#include "fave/seed.h"
#include "fave/topology.h"

namespace fave {

enum class RankingMetric { kUtilization, kMaxflowDelta, kSeedImportance };
std::string_view to_string(RankingMetric metric);

struct LinkScore {
  LinkId link = 0;
  double score = 0.0;
};

// Links by descending score; equal scores ordered by link id.
struct LinkRanking {
  RankingMetric metric = RankingMetric::kUtilization;
  std::vector<LinkScore> entries;
};

// Carried load / capacity at the all-up configuration under shortest-path
// max-min routing. Infinite-capacity links score 0.
LinkRanking rank_utilization(const Topology& topo, const FlowSet& flows);

// Gain in the summed max-flow of the distinct flow (src, dst) pairs from
// adding `unit` capacity to each link, all links up.
LinkRanking rank_maxflow_delta(const Topology& topo, const FlowSet& flows, double unit = 1.0);

struct SeedImportanceOptions {
  SamplerKind method = SamplerKind::kSeedVre;
  std::uint64_t draws = 1000;
  std::uint64_t seed = 1;
};

// score(e_j) = sum over flows in `unmet` of P[R_i = 1 | x_j = 1], each
// estimated by a SEED sampler that fixes e_j down first. `seeds` is
// indexed like `flows`. Throws InvalidArgument for an empty `unmet`.
LinkRanking rank_seed_importance(const Topology& topo, const FlowSet& flows, RoutingPolicy policy,
                                 const std::vector<FlowId>& unmet,
                                 const std::vector<SeedCollection>& seeds,
                                 const SeedImportanceOptions& options = {});

// Default properties of proposed links.
inline constexpr double kProposalDefaultP = 0.01;
inline constexpr double kProposalDefaultCapacity = 2500.0;

struct ProposedLink {
  std::string src;
  std::string dst;
  double p = kProposalDefaultP;
  Capacity capacity = Capacity(kProposalDefaultCapacity);
};

struct Proposal {
  std::string label;
  Topology base;
  std::vector<ProposedLink> added_links;
};

// Base topology with the proposal's links appended (ids N_l+1, ...).
Topology apply(const Proposal& proposal);

enum class TargetStatus { kAchieved, kUnreached, kUndecided };
std::string_view to_string(TargetStatus status);

struct FlowAvailability {
  FlowId flow_id = 0;
  double target = 0.0;
  double availability = 0.0;  // 1 - mu^
  double lower = 0.0;         // availability confidence bounds, clipped to [0,1]
  double upper = 0.0;
  std::uint64_t samples = 0;
  TargetStatus status = TargetStatus::kUndecided;
};

struct FeasibilityReport {
  std::string label;
  std::vector<FlowAvailability> flows;
  bool feasible = false;  // every flow achieved
  std::size_t undecided() const;
};

// Classification of one flow's availability interval against its target.
TargetStatus classify(double lower, double upper, double target);

struct EvaluationOptions {
  SamplerKind method = SamplerKind::kSeedVre;  // pure method for the per-flow mixture
  std::uint64_t batch = 2000;                  // draws per round
  std::uint64_t budget = 200000;               // max draws before giving up
  std::uint64_t seed = 1;
  double confidence = 0.95;
  std::size_t workers = 1;
  std::uint64_t collect_draws = 20000;  // SEED collection when not enumerable
  double collect_inflation = 20.0;
};

// Samples in rounds until every flow's target lies outside its availability
// interval or the budget is spent; unresolved flows are reported undecided.
FeasibilityReport evaluate_proposal(const Proposal& proposal, const FlowSet& flows, RoutingPolicy policy,
                                    const EvaluationOptions& options);
// Same, with a caller-built sampler over `topo`.
FeasibilityReport evaluate_availability(const std::string& label, const Sampler& sampler,
                                        const FlowSet& flows, RoutingPolicy policy,
                                        const EvaluationOptions& options);

}  // namespace fave
