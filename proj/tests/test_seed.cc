#include <random>

#include "doctest.h"
#include "fave/errors.h"
#include "fave/seed.h"
#include "fave/workflow.h"
#include "support/brute.h"
#include "support/fixtures.h"
#include "support/instances.h"

using namespace fave;

namespace {

SeedCollection from_brute(const std::vector<std::vector<std::uint32_t>>& sets) {
  std::vector<LinkSet> out;
  for (const auto& s : sets) out.emplace_back(std::vector<LinkId>(s.begin(), s.end()));
  return SeedCollection(out);
}

}  // namespace

TEST_CASE("collections canonicalize to antichains") {
  SeedCollection c({{4, 5}, {1}, {1, 2}, {4, 5}});
  CHECK(c.sets() == std::vector<LinkSet>{{1}, {4, 5}});
  SeedCollection absorbed({{3}, {}, {1, 2}});
  CHECK(absorbed.certain());
  CHECK(is_antichain(std::vector<LinkSet>{{1}, {4, 5}}));
  CHECK_FALSE(is_antichain(std::vector<LinkSet>{{1}, {1, 2}}));
  CHECK(is_antichain(std::vector<LinkSet>{{}}));
}

TEST_CASE("update_cond_seed") {
  auto s = testing_support::five_link_seeds();
  auto c = s;
  const int xs[] = {0, 1, 0, 1};
  for (LinkId i = 1; i <= 4; ++i) c = update_cond_seed(i, xs[i - 1] == 1, c);
  CHECK(c.sets() == std::vector<LinkSet>{{5}});
  CHECK(update_cond_seed(1, true, s).certain());
  CHECK(update_cond_seed(1, false, s).sets() == std::vector<LinkSet>{{4, 5}});
  // removing a link can nest sets: {1,2},{2,3} after x_1=1 -> {2}
  CHECK(update_cond_seed(1, true, SeedCollection({{1, 2}, {2, 3}})).sets() == std::vector<LinkSet>{{2}});
}

TEST_CASE("enumerate_seeds examples") {
  auto topo = testing_support::diamond_topology();
  auto flows = testing_support::diamond_flows();
  CHECK(enumerate_seeds(topo, flows, 1, RoutingPolicy::kShortestPathMaxMin).sets() ==
        std::vector<LinkSet>{{1, 2}, {1, 3}});
  auto r = span_indicator(testing_support::five_link_seeds());
  CHECK(enumerate_seeds(r, 5).sets() == std::vector<LinkSet>{{1}, {4, 5}});
  Topology single({"A", "B"}, {{1, "A", "B", 0.1, Capacity(1)}});
  CHECK(enumerate_seeds(single, FlowSet({{1, "A", "B", 1, 0}}), 1, RoutingPolicy::kMaxFlow).sets() ==
        std::vector<LinkSet>{{1}});
  auto never = [](const FailureConfig&) { return false; };
  CHECK(enumerate_seeds(never, 4).empty());
  auto always = [](const FailureConfig&) { return true; };
  CHECK(enumerate_seeds(always, 4).certain());
}

TEST_CASE("enumerate_seeds refuses above the limit") {
  auto r = [](const FailureConfig& x) { return x.is_down(1); };
  CHECK_THROWS_AS(enumerate_seeds(r, 64), LimitExceeded);
}

TEST_CASE("enumeration matches brute force and characterizes the failure set") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = testing_support::random_instance(seed, {4, 10, 2, 0.01, 0.3});
    const std::size_t n = inst.topo.link_count();
    for (std::size_t f = 0; f < inst.flows.size(); ++f) {
      auto got = enumerate_seeds(inst.topo, inst.flows, inst.flows[f].id, inst.policy);
      CHECK(got == from_brute(brute::minimal_sets(inst.tables[f], n)));
      CHECK(got.flow_id() == inst.flows[f].id);
      for (brute::Mask x = 0; x < (brute::Mask{1} << n); ++x)
        CHECK(got.spans(psi_inv(FailureConfig::from_mask(x, n))) == (inst.tables[f][x] != 0));
    }
  }
}

TEST_CASE("cond-SEED chains equal the residual minimal sets") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = testing_support::random_instance(seed, {4, 10, 1, 0.01, 0.3});
    const std::size_t n = inst.topo.link_count();
    const auto& t = inst.tables[0];
    auto full = enumerate_seeds(inst.topo, inst.flows, 1, inst.policy);
    for (brute::Mask x = 0; x < (brute::Mask{1} << n); ++x) {
      SeedCollection c = full;
      for (std::size_t i = 1; i <= n; ++i) {
        const bool d = (x >> (i - 1)) & 1;
        c = update_cond_seed(static_cast<LinkId>(i), d, c);
        const brute::Mask prefix_down = x & ((brute::Mask{1} << i) - 1);
        const brute::Mask free = ((brute::Mask{1} << n) - 1) & ~((brute::Mask{1} << i) - 1);
        std::vector<LinkSet> expect;
        for (brute::Mask m : brute::residual_minimal(t, prefix_down, free)) {
          std::vector<LinkId> ids;
          for (std::size_t k = 0; k < n; ++k)
            if (m >> k & 1) ids.push_back(static_cast<LinkId>(k + 1));
          expect.emplace_back(ids);
        }
        CHECK(c == SeedCollection(expect));
      }
    }
  }
}

TEST_CASE("seed_update examples") {
  auto one = [](SeedCollection c, std::initializer_list<LinkId> down, std::size_t n) {
    std::vector<SeedCollection> v{std::move(c)};
    const char failed[] = {1};
    seed_update_in_place(v, psi(LinkSet(down), n), failed);
    return v[0];
  };
  CHECK(one(SeedCollection({{1, 2}}), {2}, 3).sets() == std::vector<LinkSet>{{2}});
  CHECK(one(SeedCollection({LinkSet{2}}), {1, 2}, 3).sets() == std::vector<LinkSet>{{2}});
  CHECK(one(SeedCollection(), {4, 5}, 5).sets() == std::vector<LinkSet>{{4, 5}});

  SeedUpdateDiagnostics diag;
  std::vector<SeedCollection> colls{SeedCollection({LinkSet{1}}), SeedCollection()};
  const char flags[] = {0, 1};
  auto next = seed_update(colls, psi({1, 3}, 3), flags, &diag);
  CHECK(next[0] == colls[0]);
  CHECK(next[1].sets() == std::vector<LinkSet>{{1, 3}});
  CHECK(diag.contradictions == 1);
  CHECK(diag.observed_failures == 1);
  CHECK(diag.insertions == 1);
}

TEST_CASE("good_coverage_subset") {
  SeedCollection s4(testing_support::twelve_link_seed_sets());
  CHECK(good_coverage_subset(s4, 0).sets() == std::vector<LinkSet>{{2, 5}, {7, 8}});
  CHECK(good_coverage_subset(s4, 1) == s4);
  CHECK(good_coverage_subset(s4, 7) == s4);
  CHECK(good_coverage_subset(testing_support::five_link_seeds(), 0).sets() == std::vector<LinkSet>{{1}});
  CHECK_THROWS_AS(good_coverage_subset(SeedCollection(), 0), InvalidArgument);
}

TEST_CASE("SEED-updating converges monotonically under exhaustive presentation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = testing_support::random_instance(seed, {4, 9, 3, 0.01, 0.3});
    const std::size_t n = inst.topo.link_count();
    std::vector<SeedCollection> colls(inst.flows.size());
    std::mt19937_64 gen(seed);
    std::vector<brute::Mask> order(std::size_t{1} << n);
    for (brute::Mask x = 0; x < order.size(); ++x) order[x] = x;
    std::shuffle(order.begin(), order.end(), gen);
    for (brute::Mask x : order) {
      auto cfg = FailureConfig::from_mask(x, n);
      std::vector<char> failed(inst.flows.size());
      for (std::size_t f = 0; f < failed.size(); ++f) failed[f] = inst.tables[f][x];
      auto next = seed_update(colls, cfg, failed);
      for (std::size_t f = 0; f < colls.size(); ++f) {
        CHECK(is_antichain(next[f].sets()));
        for (const auto& s : colls[f]) CHECK(next[f].spans(s));
      }
      colls = std::move(next);
    }
    for (std::size_t f = 0; f < colls.size(); ++f)
      CHECK(colls[f] == from_brute(brute::minimal_sets(inst.tables[f], n)));
  }
}
