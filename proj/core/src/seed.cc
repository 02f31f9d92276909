#include "fave/seed.h"

#include <algorithm>
#include <memory>

#include "fave/errors.h"
#include "fave/exhaustive.h"

namespace fave {

std::vector<LinkSet> minimal_elements(std::vector<LinkSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  if (!sets.empty() && sets.front().empty()) return {LinkSet{}};
  // Sorted by cardinality, so any subset of sets[i] precedes it.
  std::vector<LinkSet> kept;
  kept.reserve(sets.size());
  for (auto& s : sets) {
    bool dominated = std::any_of(kept.begin(), kept.end(),
                                 [&](const LinkSet& k) { return k.is_subset_of(s); });
    if (!dominated) kept.push_back(std::move(s));
  }
  return kept;
}

bool is_antichain(std::span<const LinkSet> sets) {
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j)
      if (i != j && (sets[i].is_proper_subset_of(sets[j]) || (i < j && sets[i] == sets[j])))
        return false;
  return true;
}

SeedCollection::SeedCollection(std::vector<LinkSet> sets, FlowId flow_id)
    : sets_(minimal_elements(std::move(sets))), flow_id_(flow_id) {}

bool SeedCollection::spans(const LinkSet& links) const { return in_span(links, sets_); }

bool SeedCollection::absorb_failure(const LinkSet& observed) {
  if (spans(observed)) return false;
  std::erase_if(sets_, [&](const LinkSet& s) { return observed.is_proper_subset_of(s); });
  sets_.insert(std::upper_bound(sets_.begin(), sets_.end(), observed), observed);
  if (observed.empty()) sets_ = {LinkSet{}};
  return true;
}

LinkId SeedCollection::max_link() const {
  LinkId m = 0;
  for (const auto& s : sets_) m = std::max(m, s.max_id());
  return m;
}

SeedCollection update_cond_seed(LinkId link, bool down, const SeedCollection& coll) {
  std::vector<LinkSet> next;
  next.reserve(coll.size());
  if (down) {
    for (const auto& s : coll) next.push_back(s.without(link));
  } else {
    for (const auto& s : coll)
      if (!s.contains(link)) next.push_back(s);
  }
  return SeedCollection(std::move(next), coll.flow_id());
}

SeedCollection enumerate_seeds(const Indicator& r, std::size_t n_links, FlowId flow_id) {
  require_exhaustive(n_links, "enumerate_seeds");
  const std::uint64_t total = 1ull << n_links;
  std::vector<char> fails(total);
  for (std::uint64_t m = 0; m < total; ++m) fails[m] = r(FailureConfig::from_mask(m, n_links));

  std::vector<LinkSet> seeds;
  for (std::uint64_t m = 0; m < total; ++m) {
    if (!fails[m]) continue;
    bool minimal = true;
    for (std::size_t k = 0; k < n_links; ++k) {
      const std::uint64_t bit = 1ull << k;
      if (!(m & bit)) {
        if (!fails[m | bit])
          throw ModelError("routing indicator is not failure-monotone: " +
                           psi_inv(FailureConfig::from_mask(m, n_links)).to_string() +
                           " fails but superset " +
                           psi_inv(FailureConfig::from_mask(m | bit, n_links)).to_string() +
                           " succeeds");
      } else if (fails[m ^ bit]) {
        minimal = false;
      }
    }
    if (minimal) seeds.push_back(psi_inv(FailureConfig::from_mask(m, n_links)));
  }
  return SeedCollection(std::move(seeds), flow_id);
}

SeedCollection enumerate_seeds(const Topology& topo, const FlowSet& flows, FlowId flow_id,
                               RoutingPolicy policy) {
  return enumerate_seeds(flow_indicator(topo, flows, policy, flow_id), topo.link_count(), flow_id);
}

void seed_update_in_place(std::vector<SeedCollection>& colls, const FailureConfig& x,
                          std::span<const char> failed, SeedUpdateDiagnostics* diag) {
  if (failed.size() != colls.size())
    throw InvalidArgument("seed_update: one failure flag per collection required");
  const LinkSet observed = psi_inv(x);
  for (std::size_t k = 0; k < colls.size(); ++k) {
    if (failed[k]) {
      bool changed = colls[k].absorb_failure(observed);
      if (diag) {
        ++diag->observed_failures;
        changed ? ++diag->insertions : ++diag->already_spanned;
      }
    } else if (diag && colls[k].spans(observed)) {
      ++diag->contradictions;
    }
  }
}

std::vector<SeedCollection> seed_update(std::span<const SeedCollection> colls,
                                        const FailureConfig& x, std::span<const char> failed,
                                        SeedUpdateDiagnostics* diag) {
  std::vector<SeedCollection> out(colls.begin(), colls.end());
  seed_update_in_place(out, x, failed, diag);
  return out;
}

SeedCollection good_coverage_subset(const SeedCollection& coll, std::size_t k) {
  if (coll.empty()) throw InvalidArgument("good_coverage_subset: empty SEED collection");
  std::size_t smallest = coll.sets().front().size();
  for (const auto& s : coll) smallest = std::min(smallest, s.size());
  std::vector<LinkSet> kept;
  for (const auto& s : coll)
    if (s.size() <= smallest + k) kept.push_back(s);
  return SeedCollection(std::move(kept), coll.flow_id());
}

Indicator span_indicator(SeedCollection coll) {
  auto shared = std::make_shared<const SeedCollection>(std::move(coll));
  return [shared](const FailureConfig& x) { return shared->spans(psi_inv(x)); };
}

}  // namespace fave
