#include "fave/workflow.h"

#include <algorithm>

#include "fave/errors.h"
#include "fave/exhaustive.h"
#include "fave/oracle.h"

namespace fave {
namespace {

std::vector<SeedCollection> prepare(const FlowSet& flows, std::vector<SeedCollection> initial) {
  if (initial.empty()) {
    for (const auto& f : flows) initial.emplace_back(std::vector<LinkSet>{}, f.id);
  }
  if (initial.size() != flows.size()) throw InvalidArgument("one initial SEED collection per flow required");
  for (std::size_t k = 0; k < flows.size(); ++k) initial[k].set_flow_id(flows[k].id);
  return initial;
}

}  // namespace

double CollectResult::coverage() const {
  if (diagnostics.observed_failures == 0) return 1.0;
  return static_cast<double>(diagnostics.already_spanned) /
         static_cast<double>(diagnostics.observed_failures);
}

CollectResult collect_seeds(const Topology& topo, const FlowSet& flows, RoutingPolicy policy,
                            std::vector<SeedCollection> initial, const CollectOptions& options) {
  if (!(options.inflation > 0.0)) throw InvalidArgument("inflation factor must be positive");
  CollectResult out{prepare(flows, std::move(initial)), {}};
  std::vector<double> p(topo.link_count());
  for (const auto& l : topo.links()) p[l.id - 1] = std::min(1.0, l.p * options.inflation);
  RngStream rng(options.seed, 0);
  FailureConfig x(topo.link_count());
  for (std::uint64_t k = 0; k < options.draws; ++k) {
    for (LinkId id = 1; id <= topo.link_count(); ++id) x.set(id, rng.bernoulli(p[id - 1]));
    auto failed = evaluate_all(topo, x, flows, policy);
    seed_update_in_place(out.collections, x, failed, &out.diagnostics);
  }
  return out;
}

CollectResult collect_seeds_exhaustive(const Topology& topo, const FlowSet& flows, RoutingPolicy policy,
                                       std::vector<SeedCollection> initial) {
  require_exhaustive(topo.link_count(), "collect_seeds_exhaustive");
  CollectResult out{prepare(flows, std::move(initial)), {}};
  const std::uint64_t total = 1ull << topo.link_count();
  for (std::uint64_t m = 0; m < total; ++m) {
    auto x = FailureConfig::from_mask(m, topo.link_count());
    auto failed = evaluate_all(topo, x, flows, policy);
    seed_update_in_place(out.collections, x, failed, &out.diagnostics);
  }
  return out;
}

std::vector<SeedCollection> enumerate_all_seeds(const Topology& topo, const FlowSet& flows,
                                                RoutingPolicy policy) {
  std::vector<SeedCollection> out;
  for (const auto& f : flows) out.push_back(enumerate_seeds(topo, flows, f.id, policy));
  return out;
}

Sampler build_flow_sampler(SamplerKind method, const Topology& topo, const FlowSet& flows,
                           RoutingPolicy policy, FlowId flow_id, const SeedCollection& seeds,
                           std::uint64_t pilot_draws, std::uint64_t seed) {
  switch (method) {
    case SamplerKind::kMonteCarlo:
      return Sampler::monte_carlo(topo);
    case SamplerKind::kBaselineIs: {
      auto r = flow_indicator(topo, flows, policy, flow_id);
      if (topo.link_count() <= exhaustive_limit() && exact_mu(topo, r) > 0.0)
        return Sampler::baseline_is(topo, exact_marginals(topo, r));
      if (seeds.empty()) return Sampler::monte_carlo(topo);
      RngStream rng(seed, flow_id);
      return Sampler::baseline_is(topo, pilot_marginals(topo, r, seeds, pilot_draws, rng));
    }
    case SamplerKind::kSeedZv:
    case SamplerKind::kSeedBre:
    case SamplerKind::kSeedVre:
      if (seeds.empty()) return Sampler::monte_carlo(topo);
      return Sampler::seed(method, topo, seeds);
    case SamplerKind::kMixture:
      break;
  }
  throw InvalidArgument("build_flow_sampler: a pure method is required");
}

Sampler build_flow_mixture(SamplerKind method, const Topology& topo, const FlowSet& flows,
                           RoutingPolicy policy, const std::vector<SeedCollection>& seeds,
                           std::uint64_t pilot_draws, std::uint64_t seed) {
  if (seeds.size() != flows.size()) throw InvalidArgument("one SEED collection per flow required");
  std::vector<Sampler> parts;
  parts.reserve(flows.size());
  for (std::size_t k = 0; k < flows.size(); ++k)
    parts.push_back(build_flow_sampler(method, topo, flows, policy, flows[k].id, seeds[k], pilot_draws, seed));
  return Sampler::equal_mixture(std::move(parts));
}

}  // namespace fave
