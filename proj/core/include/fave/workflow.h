#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fave/routing.h"
#include "fave/sampler.h"
#include "fave/seed.h"

namespace fave {

// SEED-Updating driven by draws from p with every failure probability
// multiplied by `inflation` (capped at 1).
struct CollectOptions {
  std::uint64_t draws = 10000;
  double inflation = 1.0;
  std::uint64_t seed = 1;
};

struct CollectResult {
  std::vector<SeedCollection> collections;  // FlowSet order
  SeedUpdateDiagnostics diagnostics;
  // Fraction of observed failures that were already spanned.
  double coverage() const;
};

CollectResult collect_seeds(const Topology& topo, const FlowSet& flows, RoutingPolicy policy,
                            std::vector<SeedCollection> initial, const CollectOptions& options);

// Presents every configuration once, in mask order (small nets only).
CollectResult collect_seeds_exhaustive(const Topology& topo, const FlowSet& flows, RoutingPolicy policy,
                                       std::vector<SeedCollection> initial);

// Exact SEED sets for every flow (exhaustive limit applies).
std::vector<SeedCollection> enumerate_all_seeds(const Topology& topo, const FlowSet& flows,
                                                RoutingPolicy policy);

// Pure importance distribution for one flow. SEED methods fall back to
// plain p when the collection is empty; baseline IS uses exact marginals
// when enumerable and pilot estimates otherwise.
Sampler build_flow_sampler(SamplerKind method, const Topology& topo, const FlowSet& flows,
                           RoutingPolicy policy, FlowId flow_id, const SeedCollection& seeds,
                           std::uint64_t pilot_draws = 2000, std::uint64_t seed = 1);

// Equally weighted mixture of per-flow pure distributions.
Sampler build_flow_mixture(SamplerKind method, const Topology& topo, const FlowSet& flows,
                           RoutingPolicy policy, const std::vector<SeedCollection>& seeds,
                           std::uint64_t pilot_draws = 2000, std::uint64_t seed = 1);

}  // namespace fave
