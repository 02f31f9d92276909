#pragma once

#include <vector>

#include "fave/routing.h"
#include "fave/seed.h"
#include "fave/topology.h"

namespace testing_support {

// A->B direct (e1), D->A (e2), D->B (e3), two parallel B->D (e4, e5). Flow A->D
// fails iff e1 is down or both B->D links are down.
inline fave::Topology five_link_topology(double p = 0.001) {
  return fave::Topology({"A", "B", "C", "D"}, {{1, "A", "B", p, fave::Capacity(10)},
                                               {2, "D", "A", p, fave::Capacity(10)},
                                               {3, "D", "B", p, fave::Capacity(10)},
                                               {4, "B", "D", p, fave::Capacity(10)},
                                               {5, "B", "D", p, fave::Capacity(10)}});
}
inline fave::FlowSet five_link_flows() { return fave::FlowSet({{1, "A", "D", 10.0, 0.9999}}); }
inline fave::SeedCollection five_link_seeds() { return fave::SeedCollection({{1}, {4, 5}}, 1); }

// e1 A->B, e2 A->C, e3 C->B, all c=10; flow A->B demand 10.
inline fave::Topology diamond_topology(double p = 0.01) {
  return fave::Topology({"A", "B", "C"}, {{1, "A", "B", p, fave::Capacity(10)},
                                          {2, "A", "C", p, fave::Capacity(10)},
                                          {3, "C", "B", p, fave::Capacity(10)}});
}
inline fave::FlowSet diamond_flows(double target = 0.9) { return fave::FlowSet({{1, "A", "B", 10.0, target}}); }

// Three parallel S->T links; demand 20 fails exactly on 110, 111, 011.
inline fave::Topology parallel3_topology() {
  return fave::Topology({"S", "T"}, {{1, "S", "T", 0.001, fave::Capacity(10)},
                                     {2, "S", "T", 0.2, fave::Capacity(20)},
                                     {3, "S", "T", 0.001, fave::Capacity(10)}});
}
inline fave::FlowSet parallel3_flows() { return fave::FlowSet({{1, "S", "T", 20.0, 0.9}}); }

inline std::vector<fave::LinkSet> twelve_link_seed_sets() {
  return {{2, 5}, {7, 8}, {2, 3, 8}, {2, 8, 12}, {5, 6, 7}, {5, 7, 11}};
}

// Twelve isolated links with p_i = factor_i * eps; only the SEED structure matters.
inline fave::Topology twelve_link_topology(double eps) {
  static const double factor[12] = {0.8, 1.2, 0.6, 1.0, 1.4, 0.9, 1.1, 0.7, 1.3, 0.5, 1.5, 1.0};
  std::vector<fave::LinkSpec> specs;
  for (fave::LinkId id = 1; id <= 12; ++id) specs.push_back({id, "U", "V", factor[id - 1] * eps, fave::Capacity(1)});
  return fave::Topology({"U", "V"}, specs);
}

}  // namespace testing_support
