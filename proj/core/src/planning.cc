#include "fave/planning.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "fave/errors.h"
#include "fave/exhaustive.h"
#include "fave/workflow.h"

namespace fave {
namespace {

LinkRanking sorted(RankingMetric metric, std::vector<LinkScore> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const LinkScore& a, const LinkScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.link < b.link;
  });
  return LinkRanking{metric, std::move(entries)};
}

}  // namespace

std::string_view to_string(RankingMetric metric) {
  switch (metric) {
    case RankingMetric::kUtilization:
      return "utilization";
    case RankingMetric::kMaxflowDelta:
      return "maxflow-delta";
    case RankingMetric::kSeedImportance:
      return "seed-importance";
  }
  return "?";
}

std::string_view to_string(TargetStatus status) {
  switch (status) {
    case TargetStatus::kAchieved:
      return "achieved";
    case TargetStatus::kUnreached:
      return "unreached";
    case TargetStatus::kUndecided:
      return "undecided";
  }
  return "?";
}

LinkRanking rank_utilization(const Topology& topo, const FlowSet& flows) {
  const FailureConfig all_up(topo.link_count());
  const auto alloc = route_maxmin(topo, all_up, flows);
  std::vector<LinkScore> scores;
  for (const auto& l : topo.links()) {
    double s = 0.0;
    if (!l.capacity.is_infinite() && l.capacity.value() > 0.0) s = alloc.load[l.id - 1] / l.capacity.value();
    scores.push_back({l.id, s});
  }
  return sorted(RankingMetric::kUtilization, std::move(scores));
}

LinkRanking rank_maxflow_delta(const Topology& topo, const FlowSet& flows, double unit) {
  if (!(unit > 0.0)) throw InvalidArgument("maxflow-delta unit must be positive");
  std::set<std::pair<NodeIndex, NodeIndex>> pairs;
  for (const auto& f : flows) pairs.emplace(topo.node(f.src), topo.node(f.dst));
  const FailureConfig all_up(topo.link_count());
  auto total = [&](const Topology& t) {
    double sum = 0.0;
    for (auto [s, d] : pairs) sum += max_flow(t, all_up, s, d);
    return sum;
  };
  const double base = total(topo);
  std::vector<LinkScore> scores;
  for (const auto& l : topo.links()) {
    double s = 0.0;
    if (!l.capacity.is_infinite() && std::isfinite(base)) {
      auto bumped = topo.with_capacity(l.id, Capacity(l.capacity.value() + unit));
      s = total(bumped) - base;
    }
    scores.push_back({l.id, s});
  }
  return sorted(RankingMetric::kMaxflowDelta, std::move(scores));
}

LinkRanking rank_seed_importance(const Topology& topo, const FlowSet& flows, RoutingPolicy policy,
                                 const std::vector<FlowId>& unmet, const std::vector<SeedCollection>& seeds,
                                 const SeedImportanceOptions& options) {
  if (unmet.empty()) throw InvalidArgument("seed-importance ranking needs at least one unmet flow");
  if (seeds.size() != flows.size()) throw InvalidArgument("one SEED collection per flow required");
  if (options.draws == 0) throw InvalidArgument("seed-importance ranking needs at least one draw");
  std::vector<LinkScore> scores;
  for (const auto& l : topo.links()) {
    // e_j goes first in the sampling order, fixed down.
    std::vector<LinkId> order{l.id};
    for (LinkId id = 1; id <= topo.link_count(); ++id)
      if (id != l.id) order.push_back(id);
    const ForcedStatus forced[] = {{l.id, true}};
    double score = 0.0;
    for (FlowId fid : unmet) {
      const std::size_t k = flows.index_of(fid);
      auto r = flow_indicator(topo, flows, policy, fid);
      Sampler sampler = seeds[k].empty()
                            ? Sampler::monte_carlo(topo)
                            : Sampler::seed(options.method, topo, seeds[k], SeedSamplerOptions{order});
      RngStream rng(options.seed, (static_cast<std::uint64_t>(l.id) << 32) | fid);
      EstimateSummary s{fid, std::string(to_string(sampler.kind()))};
      for (std::uint64_t n = 0; n < options.draws; ++n) {
        auto d = sampler.draw_conditional(forced, rng);
        s.add(r(d.config) ? std::exp(d.log_weight) : 0.0);
      }
      score += s.mean;
    }
    scores.push_back({l.id, score});
  }
  return sorted(RankingMetric::kSeedImportance, std::move(scores));
}

Topology apply(const Proposal& proposal) {
  std::vector<LinkSpec> extra;
  for (const auto& a : proposal.added_links) {
    if (!proposal.base.find_node(a.src) || !proposal.base.find_node(a.dst))
      throw InvalidArgument("proposal '" + proposal.label + "' adds a link between undeclared nodes");
    extra.push_back(LinkSpec{0, a.src, a.dst, a.p, a.capacity});
  }
  return proposal.base.with_added_links(extra);
}

std::size_t FeasibilityReport::undecided() const {
  return static_cast<std::size_t>(std::count_if(flows.begin(), flows.end(), [](const FlowAvailability& f) {
    return f.status == TargetStatus::kUndecided;
  }));
}

TargetStatus classify(double lower, double upper, double target) {
  if (lower >= target) return TargetStatus::kAchieved;
  if (upper < target) return TargetStatus::kUnreached;
  return TargetStatus::kUndecided;
}

FeasibilityReport evaluate_availability(const std::string& label, const Sampler& sampler, const FlowSet& flows,
                                        RoutingPolicy policy, const EvaluationOptions& options) {
  if (options.batch == 0) throw InvalidArgument("evaluation batch must be positive");
  const Topology& topo = sampler.topology();
  std::vector<FlowId> ids;
  for (const auto& f : flows) ids.push_back(f.id);
  MultiIndicator r = [&](const FailureConfig& x) { return evaluate_all(topo, x, flows, policy); };

  FeasibilityReport rep{label, {}, false};
  std::vector<EstimateSummary> acc;
  std::uint64_t used = 0;
  for (std::uint64_t round = 0; used < options.budget; ++round) {
    EstimateOptions eo;
    eo.samples = std::min(options.batch, options.budget - used);
    eo.seed = options.seed + 0x9e3779b97f4a7c15ull * (round + 1);
    eo.workers = options.workers;
    eo.confidence = options.confidence;
    auto part = estimate_multi(sampler, r, ids, eo);
    if (acc.empty()) {
      acc = std::move(part);
    } else {
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = merge(acc[k], part[k]);
    }
    used += eo.samples;

    rep.flows.clear();
    bool open = false;
    for (std::size_t k = 0; k < acc.size(); ++k) {
      const auto [lo_mu, hi_mu] = acc[k].ci();
      FlowAvailability fa;
      fa.flow_id = ids[k];
      fa.target = flows[k].target;
      fa.availability = 1.0 - acc[k].mean;
      fa.lower = std::clamp(1.0 - hi_mu, 0.0, 1.0);
      fa.upper = std::clamp(1.0 - lo_mu, 0.0, 1.0);
      fa.samples = acc[k].n;
      fa.status = classify(fa.lower, fa.upper, fa.target);
      open = open || fa.status == TargetStatus::kUndecided;
      rep.flows.push_back(fa);
    }
    if (!open) break;
  }
  rep.feasible = std::all_of(rep.flows.begin(), rep.flows.end(),
                             [](const FlowAvailability& f) { return f.status == TargetStatus::kAchieved; });
  return rep;
}

FeasibilityReport evaluate_proposal(const Proposal& proposal, const FlowSet& flows, RoutingPolicy policy,
                                    const EvaluationOptions& options) {
  const Topology topo = apply(proposal);
  std::vector<SeedCollection> seeds;
  if (options.method == SamplerKind::kMonteCarlo) {
    seeds.resize(flows.size());
  } else if (topo.link_count() <= exhaustive_limit()) {
    seeds = enumerate_all_seeds(topo, flows, policy);
  } else {
    CollectOptions co{options.collect_draws, options.collect_inflation, options.seed};
    seeds = collect_seeds(topo, flows, policy, {}, co).collections;
  }
  const Sampler sampler = build_flow_mixture(options.method, topo, flows, policy, seeds, 2000, options.seed);
  return evaluate_availability(proposal.label, sampler, flows, policy, options);
}

}  // namespace fave
