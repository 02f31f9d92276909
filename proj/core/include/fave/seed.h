#pragma once

#include <span>
#include <vector>

#include "fave/failure_config.h"
#include "fave/link_set.h"
#include "fave/routing.h"

namespace fave {

// A Sperner family of link sets describing one flow: either its SEEDs
// (minimal failing link sets) or the conditional SEEDs for a prefix.
//
// Construction canonicalizes: members are sorted, deduplicated, and reduced
// to their minimal elements. If the empty set is present the collection
// collapses to exactly {{}} (failure certain).
class SeedCollection {
 public:
  SeedCollection() = default;
  explicit SeedCollection(std::vector<LinkSet> sets, FlowId flow_id = 0);

  FlowId flow_id() const { return flow_id_; }
  void set_flow_id(FlowId id) { flow_id_ = id; }
  const std::vector<LinkSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  // True for the absorbing collection {{}}.
  bool certain() const { return sets_.size() == 1 && sets_.front().empty(); }
  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }

  bool spans(const LinkSet& links) const;
  // SEED-Updating step for one observed failing set: when `observed`
  // is not already spanned, insert it and drop its proper supersets.
  // Returns true if the collection changed.
  bool absorb_failure(const LinkSet& observed);
  // Largest link id mentioned by any member.
  LinkId max_link() const;

  bool operator==(const SeedCollection& other) const { return sets_ == other.sets_; }

 private:
  std::vector<LinkSet> sets_;
  FlowId flow_id_ = 0;
};

// Minimal elements of `sets`, sorted and deduplicated.
std::vector<LinkSet> minimal_elements(std::vector<LinkSet> sets);

bool is_antichain(std::span<const LinkSet> sets);

// One step of the cond-SEED recursion for link `link` with status `down`:
// down  -> {L \ {link}}, antichain-reduced (absorbing when {} appears)
// up    -> {L : link not in L}
SeedCollection update_cond_seed(LinkId link, bool down, const SeedCollection& coll);

// Exact SEED set by exhaustive enumeration of R. Throws LimitExceeded above
// the exhaustive limit and ModelError when R is not failure-monotone.
SeedCollection enumerate_seeds(const Indicator& r, std::size_t n_links, FlowId flow_id = 0);
SeedCollection enumerate_seeds(const Topology& topo, const FlowSet& flows, FlowId flow_id,
                               RoutingPolicy policy);

// Counts of SEED-Updating events across calls.
struct SeedUpdateDiagnostics {
  std::size_t observed_failures = 0;
  std::size_t already_spanned = 0;   // failures already covered (coverage numerator)
  std::size_t insertions = 0;
  std::size_t contradictions = 0;    // successes inside a collection's span
};

// Applies SEED-Updating for one sampled configuration to every flow's
// collection. `failed[k]` is R_k(x). Returns the updated collections.
std::vector<SeedCollection> seed_update(std::span<const SeedCollection> colls,
                                        const FailureConfig& x, std::span<const char> failed,
                                        SeedUpdateDiagnostics* diag = nullptr);
// In-place variant used by long collection runs.
void seed_update_in_place(std::vector<SeedCollection>& colls, const FailureConfig& x,
                          std::span<const char> failed, SeedUpdateDiagnostics* diag = nullptr);

// Members whose cardinality is within k of the smallest member.
// Throws InvalidArgument for an empty collection.
SeedCollection good_coverage_subset(const SeedCollection& coll, std::size_t k);

// R(x) = [psi_inv(x) in span(coll)]
Indicator span_indicator(SeedCollection coll);

}  // namespace fave
