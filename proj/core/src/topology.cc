#include "fave/topology.h"

#include <cmath>
#include <limits>

#include "fave/errors.h"

namespace fave {

Capacity::Capacity(double units) : units_(units) {
  if (!(units >= 0.0) || std::isinf(units))
    throw InvalidArgument("capacity must be finite and non-negative (use Capacity::infinite())");
}

double Capacity::value() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : units_;
}

Topology::Topology(std::vector<std::string> nodes, std::vector<LinkSpec> links)
    : nodes_(std::move(nodes)) {
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second)
      throw InvalidArgument("duplicate node id '" + nodes_[i] + "'");
  }
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  links_.resize(links.size());
  std::vector<bool> seen(links.size(), false);
  for (const auto& spec : links) {
    if (spec.id == 0 || spec.id > links.size())
      throw InvalidLinkId("link id " + std::to_string(spec.id) + " not in 1.." +
                          std::to_string(links.size()));
    if (seen[spec.id - 1]) throw InvalidLinkId("duplicate link id " + std::to_string(spec.id));
    seen[spec.id - 1] = true;
    if (!(spec.p >= 0.0 && spec.p <= 1.0))
      throw InvalidArgument("link " + std::to_string(spec.id) + ": failure probability outside [0,1]");
    auto s = find_node(spec.src);
    auto d = find_node(spec.dst);
    if (!s || !d)
      throw InvalidArgument("link " + std::to_string(spec.id) + ": endpoint '" +
                            (!s ? spec.src : spec.dst) + "' is not a declared node");
    links_[spec.id - 1] = Link{spec.id, *s, *d, spec.p, spec.capacity};
  }
  for (const auto& l : links_) {
    out_[l.src].push_back(l.id);
    in_[l.dst].push_back(l.id);
  }
}

const Link& Topology::link(LinkId id) const {
  if (id == 0 || id > links_.size()) throw InvalidLinkId("link id " + std::to_string(id) + " out of range");
  return links_[id - 1];
}

std::optional<NodeIndex> Topology::find_node(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Topology::node(const std::string& name) const {
  auto n = find_node(name);
  if (!n) throw InvalidArgument("unknown node '" + name + "'");
  return *n;
}

std::vector<LinkSpec> Topology::link_specs() const {
  std::vector<LinkSpec> specs;
  specs.reserve(links_.size());
  for (const auto& l : links_)
    specs.push_back(LinkSpec{l.id, nodes_[l.src], nodes_[l.dst], l.p, l.capacity});
  return specs;
}

Topology Topology::with_failure_probability(LinkId id, double p) const {
  auto specs = link_specs();
  link(id);
  specs[id - 1].p = p;
  return Topology(nodes_, std::move(specs));
}

Topology Topology::with_capacity(LinkId id, Capacity c) const {
  auto specs = link_specs();
  link(id);
  specs[id - 1].capacity = c;
  return Topology(nodes_, std::move(specs));
}

Topology Topology::with_added_links(const std::vector<LinkSpec>& extra) const {
  auto specs = link_specs();
  for (auto spec : extra) {
    spec.id = static_cast<LinkId>(specs.size() + 1);
    specs.push_back(std::move(spec));
  }
  return Topology(nodes_, std::move(specs));
}

FailureConfig psi(const LinkSet& links, std::size_t n_links) {
  FailureConfig x(n_links);
  for (LinkId id : links) {
    if (id == 0 || id > n_links)
      throw InvalidLinkId("link id " + std::to_string(id) + " not in 1.." + std::to_string(n_links));
    x.set(id, true);
  }
  return x;
}

LinkSet psi_inv(const FailureConfig& x) {
  std::vector<LinkId> ids;
  for (LinkId id = 1; id <= x.size(); ++id)
    if (x.is_down(id)) ids.push_back(id);
  return LinkSet(std::move(ids));
}

double phi(const LinkSet& links, const Topology& topo) {
  double prod = 1.0;
  for (LinkId id : links) prod *= topo.link(id).p;
  return prod;
}

double config_prob(const FailureConfig& x, const Topology& topo) {
  if (x.size() != topo.link_count()) throw InvalidArgument("configuration length mismatch");
  double prod = 1.0;
  for (const auto& l : topo.links()) prod *= x.is_down(l.id) ? l.p : 1.0 - l.p;
  return prod;
}

double log_link_prob(const Link& link, bool down) {
  return down ? std::log(link.p) : std::log1p(-link.p);
}

double log_config_prob(const FailureConfig& x, const Topology& topo) {
  if (x.size() != topo.link_count()) throw InvalidArgument("configuration length mismatch");
  double sum = 0.0;
  for (const auto& l : topo.links()) sum += log_link_prob(l, x.is_down(l.id));
  return sum;
}

bool in_span(const LinkSet& links, std::span<const LinkSet> coll) {
  for (const auto& s : coll)
    if (s.is_subset_of(links)) return true;
  return false;
}

}  // namespace fave
