#include <cmath>

#include "doctest.h"
#include "fave/errors.h"
#include "fave/oracle.h"
#include "fave/planning.h"
#include "support/fixtures.h"

using namespace fave;

namespace {

double score_of(const LinkRanking& r, LinkId id) {
  for (const auto& e : r.entries)
    if (e.link == id) return e.score;
  return NAN;
}

}  // namespace

TEST_CASE("utilization ranking") {
  auto topo = testing_support::diamond_topology();
  auto r = rank_utilization(topo, testing_support::diamond_flows());
  CHECK(r.metric == RankingMetric::kUtilization);
  CHECK(r.entries[0].link == 1);
  CHECK(score_of(r, 1) == doctest::Approx(1.0));
  CHECK(score_of(r, 2) == 0.0);
  CHECK(score_of(r, 3) == 0.0);
  CHECK(r.entries[1].link == 2);  // ties by id
  auto none = rank_utilization(topo, FlowSet());
  for (const auto& e : none.entries) CHECK(e.score == 0.0);
  Topology shared({"A", "B"}, {{1, "A", "B", 0.01, Capacity(10)}, {2, "B", "A", 0.01, Capacity(10)}});
  auto two = rank_utilization(shared, FlowSet({{1, "A", "B", 5, 0}, {2, "A", "B", 5, 0}}));
  CHECK(score_of(two, 1) == doctest::Approx(1.0));
}

TEST_CASE("max-flow delta ranking") {
  auto topo = testing_support::diamond_topology();
  auto r = rank_maxflow_delta(topo, testing_support::diamond_flows());
  CHECK(score_of(r, 1) == doctest::Approx(1.0));
  // e2 and e3 form one path; raising only one of them leaves the other binding
  CHECK(score_of(r, 2) == 0.0);
  CHECK(score_of(r, 3) == 0.0);
  auto half = rank_maxflow_delta(topo, testing_support::diamond_flows(), 0.5);
  CHECK(score_of(half, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(rank_maxflow_delta(topo, testing_support::diamond_flows(), 0.0), InvalidArgument);
}

TEST_CASE("SEED-importance ranking") {
  auto topo = testing_support::five_link_topology();
  auto flows = testing_support::five_link_flows();
  std::vector<SeedCollection> seeds{testing_support::five_link_seeds()};
  SeedImportanceOptions opt;
  opt.method = SamplerKind::kSeedZv;
  opt.draws = 50;
  auto r = rank_seed_importance(topo, flows, RoutingPolicy::kShortestPathMaxMin, {1}, seeds, opt);
  CHECK(score_of(r, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(score_of(r, 4) == doctest::Approx(1.999e-3).epsilon(1e-9));
  CHECK(score_of(r, 5) == doctest::Approx(1.999e-3).epsilon(1e-9));
  // links 2 and 3 lie in no SEED: conditioning on them leaves mu unchanged
  CHECK(score_of(r, 2) == doctest::Approx(exact_mu(topo, span_indicator(seeds[0]))).epsilon(1e-9));
  CHECK(r.entries[0].link == 1);
  // 4 and 5 tie mathematically; their order follows the computed scores
  CHECK(((r.entries[1].link == 4 && r.entries[2].link == 5) || (r.entries[1].link == 5 && r.entries[2].link == 4)));
  CHECK_THROWS_AS(rank_seed_importance(topo, flows, RoutingPolicy::kShortestPathMaxMin, {}, seeds, opt),
                  InvalidArgument);

  // VRE estimates agree with the exact conditional within the CI
  opt.method = SamplerKind::kSeedVre;
  opt.draws = 4000;
  auto v = rank_seed_importance(topo, flows, RoutingPolicy::kShortestPathMaxMin, {1}, seeds, opt);
  auto rr = span_indicator(seeds[0]);
  for (LinkId j = 1; j <= 5; ++j) {
    const ForcedStatus fixed[] = {{j, true}};
    CHECK(score_of(v, j) == doctest::Approx(exact_conditional(topo, rr, fixed)).epsilon(0.05));
  }
  auto again = rank_seed_importance(topo, flows, RoutingPolicy::kShortestPathMaxMin, {1}, seeds, opt);
  for (std::size_t k = 0; k < v.entries.size(); ++k) {
    CHECK(v.entries[k].link == again.entries[k].link);
    CHECK(v.entries[k].score == again.entries[k].score);
  }
}

TEST_CASE("status classification") {
  CHECK(classify(0.9995, 0.9999, 0.999) == TargetStatus::kAchieved);
  CHECK(classify(0.998, 0.9989, 0.999) == TargetStatus::kUnreached);
  CHECK(classify(0.998, 0.9995, 0.999) == TargetStatus::kUndecided);
}

TEST_CASE("proposal evaluation") {
  auto topo = testing_support::five_link_topology();
  EvaluationOptions opt;
  opt.batch = 500;
  opt.budget = 20000;
  SUBCASE("zero targets are feasible") {
    Proposal p{"zero", topo, {}};
    auto rep = evaluate_proposal(p, FlowSet({{1, "A", "D", 10, 0.0}}), RoutingPolicy::kShortestPathMaxMin, opt);
    CHECK(rep.feasible);
    CHECK(rep.flows[0].status == TargetStatus::kAchieved);
  }
  SUBCASE("strict target is unreached") {
    Proposal p{"strict", topo, {}};
    auto rep = evaluate_proposal(p, FlowSet({{1, "A", "D", 10, 0.9999}}), RoutingPolicy::kShortestPathMaxMin, opt);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.flows[0].status == TargetStatus::kUnreached);
    CHECK(rep.flows[0].availability == doctest::Approx(1 - 1.000999e-3).epsilon(1e-9));
  }
  SUBCASE("loose target is achieved") {
    Proposal p{"loose", topo, {}};
    auto rep = evaluate_proposal(p, FlowSet({{1, "A", "D", 10, 0.99}}), RoutingPolicy::kShortestPathMaxMin, opt);
    CHECK(rep.feasible);
  }
  SUBCASE("a target equal to the availability stays undecided") {
    Proposal p{"edge", topo, {}};
    opt.method = SamplerKind::kMonteCarlo;
    opt.budget = 20000;
    opt.batch = 20000;
    auto rep =
        evaluate_proposal(p, FlowSet({{1, "A", "D", 10, 1 - 1.000999e-3}}), RoutingPolicy::kShortestPathMaxMin, opt);
    CHECK(rep.flows[0].status == TargetStatus::kUndecided);
    CHECK(rep.undecided() == 1);
    CHECK(rep.flows[0].samples == 20000);
    CHECK_FALSE(rep.feasible);
  }
}

TEST_CASE("proposals add links with defaults") {
  Proposal p{"add", testing_support::diamond_topology(), {{"A", "B"}}};
  auto t = apply(p);
  CHECK(t.link_count() == 4);
  CHECK(t.link(4).p == kProposalDefaultP);
  CHECK(t.link(4).capacity.value() == kProposalDefaultCapacity);
  Proposal bad{"bad", testing_support::diamond_topology(), {{"A", "Z"}}};
  CHECK_THROWS_AS(apply(bad), InvalidArgument);
}

TEST_CASE("a reliable parallel link never lowers availability") {
  auto topo = testing_support::diamond_topology(0.05);
  auto flows = testing_support::diamond_flows();
  const double before = exact_mu(topo, flows, RoutingPolicy::kMaxFlow, 1);
  for (LinkId id = 1; id <= 3; ++id) {
    const auto& l = topo.link(id);
    Proposal p{"par", topo, {{topo.node_name(l.src), topo.node_name(l.dst), 0.0, Capacity(10)}}};
    const double after = exact_mu(apply(p), flows, RoutingPolicy::kMaxFlow, 1);
    CHECK(after <= before + 1e-15);
  }
  // duplicating every SEED-critical link strictly improves availability
  Proposal all{"all", topo, {{"A", "B", 0.0, Capacity(10)}, {"A", "C", 0.0, Capacity(10)}, {"C", "B", 0.0, Capacity(10)}}};
  CHECK(exact_mu(apply(all), flows, RoutingPolicy::kMaxFlow, 1) < before);
}
