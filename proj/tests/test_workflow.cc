#include "doctest.h"
#include "fave/oracle.h"
#include "fave/workflow.h"
#include "support/fixtures.h"
#include "support/instances.h"

using namespace fave;

TEST_CASE("collect_seeds with no draws leaves collections unchanged") {
  auto topo = testing_support::diamond_topology();
  auto flows = testing_support::diamond_flows();
  std::vector<SeedCollection> init{SeedCollection({{1, 2, 3}}, 1)};
  auto res = collect_seeds(topo, flows, RoutingPolicy::kShortestPathMaxMin, init, {0, 1.0, 1});
  CHECK(res.collections == init);
  CHECK(res.diagnostics.observed_failures == 0);
}

TEST_CASE("inflated collection recovers the diamond SEEDs") {
  auto topo = testing_support::diamond_topology(0.01);
  auto flows = testing_support::diamond_flows();
  auto res = collect_seeds(topo, flows, RoutingPolicy::kShortestPathMaxMin, {}, {2000, 50.0, 7});
  REQUIRE(res.collections.size() == 1);
  CHECK(res.collections[0].sets() == std::vector<LinkSet>{{1, 2}, {1, 3}});
  CHECK(res.collections[0].flow_id() == 1);
  CHECK(res.coverage() > 0.0);
  CHECK(res.coverage() <= 1.0);
}

TEST_CASE("exhaustive collection equals enumeration") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = testing_support::random_instance(seed, {4, 9, 3, 0.01, 0.3});
    auto res = collect_seeds_exhaustive(inst.topo, inst.flows, inst.policy, {});
    CHECK(res.collections == enumerate_all_seeds(inst.topo, inst.flows, inst.policy));
    CHECK(res.diagnostics.contradictions == 0);
  }
}

TEST_CASE("sampler builders") {
  auto topo = testing_support::five_link_topology();
  auto flows = testing_support::five_link_flows();
  const auto pol = RoutingPolicy::kShortestPathMaxMin;
  auto vre = build_flow_sampler(SamplerKind::kSeedVre, topo, flows, pol, 1, testing_support::five_link_seeds());
  CHECK(vre.kind() == SamplerKind::kSeedVre);
  auto fallback = build_flow_sampler(SamplerKind::kSeedVre, topo, flows, pol, 1, SeedCollection());
  CHECK(fallback.kind() == SamplerKind::kMonteCarlo);
  auto is = build_flow_sampler(SamplerKind::kBaselineIs, topo, flows, pol, 1, testing_support::five_link_seeds());
  CHECK(is.kind() == SamplerKind::kBaselineIs);
  auto r = flow_indicator(topo, flows, pol, 1);
  CHECK(exact_sampler_mean(is, r) == doctest::Approx(exact_mu(topo, r)).epsilon(1e-9));

  // max-min sharing of e1 makes this pair non-monotone, so use per-flow max-flow
  FlowSet two({{1, "A", "D", 10, 0.9}, {2, "D", "B", 10, 0.9}});
  const auto mf = RoutingPolicy::kMaxFlow;
  auto seeds = enumerate_all_seeds(topo, two, mf);
  auto mix = build_flow_mixture(SamplerKind::kSeedVre, topo, two, mf, seeds);
  CHECK(mix.kind() == SamplerKind::kMixture);
  CHECK(mix.components().size() == 2);
  CHECK(mix.weights()[0] == doctest::Approx(0.5));
  for (const auto& f : two) {
    auto rf = flow_indicator(topo, two, mf, f.id);
    CHECK(exact_sampler_mean(mix, rf) == doctest::Approx(exact_mu(topo, rf)).epsilon(1e-9));
  }
}
