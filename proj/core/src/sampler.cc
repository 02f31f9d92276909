#include "fave/sampler.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fave/errors.h"

namespace fave {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class KahanSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Flat bitset table of link sets with their Phi values. Rows are antichain
// members; an all-zero single row is the absorbing {{}} state.
struct SetTable {
  std::size_t words = 1;
  std::vector<std::uint64_t> bits;
  std::vector<double> phi;

  std::size_t size() const { return phi.size(); }
  bool empty() const { return phi.empty(); }
  const std::uint64_t* row(std::size_t j) const { return bits.data() + j * words; }
  bool contains(std::size_t j, LinkId link) const {
    const std::size_t k = link - 1;
    return (row(j)[k >> 6] >> (k & 63)) & 1u;
  }
  bool row_empty(std::size_t j) const {
    const auto* r = row(j);
    return std::all_of(r, r + words, [](std::uint64_t w) { return w == 0; });
  }
  bool certain() const { return size() == 1 && row_empty(0); }
  void clear() {
    bits.clear();
    phi.clear();
  }
  void push(const std::uint64_t* r, double p) {
    bits.insert(bits.end(), r, r + words);
    phi.push_back(p);
  }
  void set_certain() {
    clear();
    bits.assign(words, 0);
    phi.push_back(1.0);
  }
};

double row_phi(const std::uint64_t* r, std::size_t words, const Topology& topo) {
  double prod = 1.0;
  for (std::size_t w = 0; w < words; ++w) {
    for (std::uint64_t m = r[w]; m; m &= m - 1) {
      const std::size_t k = w * 64 + static_cast<std::size_t>(std::countr_zero(m));
      prod *= topo.links()[k].p;
    }
  }
  return prod;
}

bool row_subset(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

SetTable make_table(const SeedCollection& coll, const Topology& topo) {
  SetTable t;
  t.words = std::max<std::size_t>(1, (topo.link_count() + 63) / 64);
  std::vector<std::uint64_t> r(t.words);
  for (const auto& s : coll) {
    std::fill(r.begin(), r.end(), 0);
    for (LinkId id : s) {
      if (id == 0 || id > topo.link_count())
        throw InvalidLinkId("SEED member " + std::to_string(id) + " outside the topology");
      r[(id - 1) >> 6] |= 1ull << ((id - 1) & 63);
    }
    t.push(r.data(), row_phi(r.data(), t.words, topo));
  }
  return t;
}

// Cond-SEEDs after link is up: members not containing it.
void branch_up(const SetTable& cur, LinkId link, SetTable& out) {
  out.words = cur.words;
  out.clear();
  for (std::size_t j = 0; j < cur.size(); ++j)
    if (!cur.contains(j, link)) out.push(cur.row(j), cur.phi[j]);
}

// Cond-SEEDs after link is down: members with it removed, reduced to the
// minimal elements. Removal keeps the modified members an antichain and
// cannot make an unmodified member a subset of one, so only unmodified
// supersets (or duplicates) of modified members need dropping.
void branch_down(const SetTable& cur, LinkId link, const Topology& topo, SetTable& out,
                 std::vector<std::uint64_t>& scratch) {
  out.words = cur.words;
  out.clear();
  const std::size_t words = cur.words;
  const std::size_t k = link - 1;
  const std::uint64_t bit = 1ull << (k & 63);
  const double p = topo.links()[k].p;
  scratch.clear();
  std::vector<double> modified_phi;
  for (std::size_t j = 0; j < cur.size(); ++j) {
    if (!cur.contains(j, link)) continue;
    const std::size_t base = scratch.size();
    scratch.insert(scratch.end(), cur.row(j), cur.row(j) + words);
    scratch[base + (k >> 6)] &= ~bit;
    bool is_empty = std::all_of(scratch.begin() + static_cast<std::ptrdiff_t>(base), scratch.end(),
                                [](std::uint64_t w) { return w == 0; });
    if (is_empty) {
      out.set_certain();
      return;
    }
    modified_phi.push_back(p > 0.0 ? cur.phi[j] / p : row_phi(scratch.data() + base, words, topo));
  }
  const std::size_t n_mod = modified_phi.size();
  for (std::size_t j = 0; j < cur.size(); ++j) {
    if (cur.contains(j, link)) continue;
    bool dominated = false;
    for (std::size_t m = 0; m < n_mod && !dominated; ++m)
      dominated = row_subset(scratch.data() + m * words, cur.row(j), words);
    if (!dominated) out.push(cur.row(j), cur.phi[j]);
  }
  for (std::size_t m = 0; m < n_mod; ++m) out.push(scratch.data() + m * words, modified_phi[m]);
}

// Inclusion-exclusion over non-empty subsets A of the table:
// sum (-1)^{|A|-1} Phi(union A).
void inclusion_exclusion(const SetTable& t, const Topology& topo, std::size_t start,
                         std::vector<std::uint64_t>& uni, double phi_uni, double sign, KahanSum& acc) {
  const std::size_t words = t.words;
  std::vector<std::uint64_t> saved(words);
  for (std::size_t j = start; j < t.size(); ++j) {
    std::copy(uni.begin(), uni.end(), saved.begin());
    double phi_new = phi_uni;
    const auto* r = t.row(j);
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t m = r[w] & ~uni[w]; m; m &= m - 1)
        phi_new *= topo.links()[w * 64 + static_cast<std::size_t>(std::countr_zero(m))].p;
      uni[w] |= r[w];
    }
    acc.add(sign * phi_new);
    if (phi_new != 0.0) inclusion_exclusion(t, topo, j + 1, uni, phi_new, -sign, acc);
    std::copy(saved.begin(), saved.end(), uni.begin());
  }
}

double estimate(SamplerKind rule, const SetTable& t, const Topology& topo, std::size_t cap) {
  if (t.empty()) return 0.0;
  if (t.certain()) return 1.0;
  switch (rule) {
    case SamplerKind::kSeedBre:
      return *std::max_element(t.phi.begin(), t.phi.end());
    case SamplerKind::kSeedVre: {
      KahanSum acc;
      for (double v : t.phi) acc.add(v);
      return std::min(1.0, acc.value());
    }
    case SamplerKind::kSeedZv: {
      if (t.size() > cap)
        throw LimitExceeded("SEED-ZV: " + std::to_string(t.size()) +
                            " cond-SEEDs exceed the inclusion-exclusion cap of " + std::to_string(cap) +
                            "; use seed-bre or seed-vre");
      std::vector<std::uint64_t> uni(t.words, 0);
      KahanSum acc;
      inclusion_exclusion(t, topo, 0, uni, 1.0, 1.0, acc);
      return std::clamp(acc.value(), 0.0, 1.0);
    }
    default:
      break;
  }
  throw InvalidArgument("not a SEED rule");
}

double log_sum_exp(std::span<const double> v) {
  double hi = kNegInf;
  for (double x : v) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

std::vector<LinkId> normalize_order(std::vector<LinkId> order, std::size_t n) {
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), LinkId{1});
    return order;
  }
  if (order.size() != n) throw InvalidArgument("sampling order must list every link exactly once");
  std::vector<char> seen(n + 1, 0);
  for (LinkId id : order) {
    if (id == 0 || id > n || seen[id]) throw InvalidArgument("sampling order is not a permutation of 1..N_l");
    seen[id] = 1;
  }
  return order;
}

}  // namespace

struct Sampler::Impl {
  SamplerKind kind = SamplerKind::kMonteCarlo;
  std::shared_ptr<const Topology> topo;
  std::vector<double> marginals;
  SeedCollection seeds;
  SetTable initial;
  std::vector<LinkId> order;
  std::size_t cap = 25;
  std::vector<Sampler> components;
  std::vector<double> weights;
  std::vector<double> log_weights;

  // Shared driver for drawing and density replay. `decide(link, log_q1,
  // log_q0)` returns the link status; the result is (log q, log p) summed
  // over the non-forced links.
  template <typename Decide>
  std::pair<double, double> run(std::span<const ForcedStatus> forced, Decide&& decide) const;
};

template <typename Decide>
std::pair<double, double> Sampler::Impl::run(std::span<const ForcedStatus> forced,
                                             Decide&& decide) const {
  const auto& links = topo->links();
  const std::size_t n = links.size();
  std::vector<char> fixed(n + 1, 0);
  for (const auto& f : forced) {
    if (f.link == 0 || f.link > n) throw InvalidLinkId("forced link outside the topology");
    fixed[f.link] = 1;
  }
  double log_q = 0.0;
  double log_p = 0.0;

  auto plain = [&](LinkId id, double q1) {
    const double lq1 = std::log(q1);
    const double lq0 = std::log1p(-q1);
    const bool down = decide(id, lq1, lq0);
    log_q += down ? lq1 : lq0;
    log_p += log_link_prob(links[id - 1], down);
  };

  if (kind == SamplerKind::kMonteCarlo || kind == SamplerKind::kBaselineIs) {
    for (LinkId id = 1; id <= n; ++id) {
      if (fixed[id]) continue;
      plain(id, kind == SamplerKind::kMonteCarlo ? links[id - 1].p : marginals[id - 1]);
      if (log_q == kNegInf) break;
    }
    return {log_q, log_p};
  }

  SetTable cur = initial;
  SetTable up, down;
  std::vector<std::uint64_t> scratch;
  for (const auto& f : forced) {
    if (f.down) {
      branch_down(cur, f.link, *topo, down, scratch);
      std::swap(cur, down);
    } else {
      branch_up(cur, f.link, up);
      std::swap(cur, up);
    }
  }
  bool seeded = true;
  for (LinkId id : order) {
    if (fixed[id]) continue;
    const double p = links[id - 1].p;
    if (seeded && (cur.empty() || cur.certain())) seeded = false;
    if (!seeded) {
      plain(id, p);
      if (log_q == kNegInf) break;
      continue;
    }
    branch_up(cur, id, up);
    branch_down(cur, id, *topo, down, scratch);
    const double a = estimate(kind, down, *topo, cap) * p;
    const double b = estimate(kind, up, *topo, cap) * (1.0 - p);
    const double total = a + b;
    if (!(total > 0.0)) {
      // Neither branch can fail under the SEED estimate: finish from p.
      seeded = false;
      plain(id, p);
      if (log_q == kNegInf) break;
      continue;
    }
    const double lq1 = a > 0.0 ? std::log(a) - std::log(total) : kNegInf;
    const double lq0 = b > 0.0 ? std::log(b) - std::log(total) : kNegInf;
    const bool is_down = decide(id, lq1, lq0);
    log_q += is_down ? lq1 : lq0;
    log_p += log_link_prob(links[id - 1], is_down);
    if (log_q == kNegInf) break;
    std::swap(cur, is_down ? down : up);
  }
  return {log_q, log_p};
}

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kMonteCarlo:
      return "mc";
    case SamplerKind::kBaselineIs:
      return "is";
    case SamplerKind::kSeedZv:
      return "seed-zv";
    case SamplerKind::kSeedBre:
      return "seed-bre";
    case SamplerKind::kSeedVre:
      return "seed-vre";
    case SamplerKind::kMixture:
      return "mixture";
  }
  return "?";
}

SamplerKind parse_sampler_kind(std::string_view name) {
  for (auto k : {SamplerKind::kMonteCarlo, SamplerKind::kBaselineIs, SamplerKind::kSeedZv,
                 SamplerKind::kSeedBre, SamplerKind::kSeedVre, SamplerKind::kMixture})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown sampling method '" + std::string(name) + "'");
}

Sampler Sampler::monte_carlo(Topology topo) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SamplerKind::kMonteCarlo;
  impl->topo = std::make_shared<const Topology>(std::move(topo));
  return Sampler(std::move(impl));
}

Sampler Sampler::baseline_is(Topology topo, std::vector<double> marginals) {
  if (marginals.size() != topo.link_count())
    throw InvalidArgument("baseline IS needs one marginal per link");
  for (const auto& l : topo.links()) {
    const double q = marginals[l.id - 1];
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("baseline IS marginal outside [0,1]");
    if (q == 0.0 && l.p > 0.0)
      throw SupportError("baseline IS marginal is 0 on link " + std::to_string(l.id) +
                         " where p > 0 (absolute continuity violated)");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = SamplerKind::kBaselineIs;
  impl->topo = std::make_shared<const Topology>(std::move(topo));
  impl->marginals = std::move(marginals);
  return Sampler(std::move(impl));
}

Sampler Sampler::seed(SamplerKind kind, Topology topo, SeedCollection seeds, SeedSamplerOptions options) {
  if (kind != SamplerKind::kSeedZv && kind != SamplerKind::kSeedBre && kind != SamplerKind::kSeedVre)
    throw InvalidArgument("Sampler::seed requires a SEED method");
  if (seeds.empty()) throw InvalidArgument("SEED samplers need a non-empty SEED collection");
  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->order = normalize_order(std::move(options.order), topo.link_count());
  impl->cap = options.inclusion_exclusion_cap;
  impl->initial = make_table(seeds, topo);
  impl->seeds = std::move(seeds);
  impl->topo = std::make_shared<const Topology>(std::move(topo));
  return Sampler(std::move(impl));
}

Sampler Sampler::seed_zv(Topology topo, SeedCollection seeds, SeedSamplerOptions options) {
  return seed(SamplerKind::kSeedZv, std::move(topo), std::move(seeds), std::move(options));
}
Sampler Sampler::seed_bre(Topology topo, SeedCollection seeds, SeedSamplerOptions options) {
  return seed(SamplerKind::kSeedBre, std::move(topo), std::move(seeds), std::move(options));
}
Sampler Sampler::seed_vre(Topology topo, SeedCollection seeds, SeedSamplerOptions options) {
  return seed(SamplerKind::kSeedVre, std::move(topo), std::move(seeds), std::move(options));
}

Sampler Sampler::mixture(std::vector<Sampler> components, std::vector<double> weights) {
  if (components.empty()) throw InvalidArgument("mixture needs at least one component");
  if (weights.size() != components.size()) throw InvalidArgument("mixture needs one weight per component");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidArgument("mixture weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("mixture weights must sum to 1");
  const std::size_t n = components.front().topology().link_count();
  for (const auto& c : components)
    if (c.topology().link_count() != n) throw InvalidArgument("mixture components disagree on N_l");
  auto impl = std::make_shared<Impl>();
  impl->kind = SamplerKind::kMixture;
  impl->topo = components.front().impl_->topo;
  impl->log_weights.reserve(weights.size());
  for (double w : weights) impl->log_weights.push_back(std::log(w));
  impl->components = std::move(components);
  impl->weights = std::move(weights);
  return Sampler(std::move(impl));
}

Sampler Sampler::equal_mixture(std::vector<Sampler> components) {
  std::vector<double> w(components.size(), 1.0 / static_cast<double>(components.size()));
  return mixture(std::move(components), std::move(w));
}

SamplerKind Sampler::kind() const { return impl_->kind; }
const Topology& Sampler::topology() const { return *impl_->topo; }
std::span<const Sampler> Sampler::components() const { return impl_->components; }
std::span<const double> Sampler::weights() const { return impl_->weights; }
const SeedCollection* Sampler::seeds() const {
  switch (impl_->kind) {
    case SamplerKind::kSeedZv:
    case SamplerKind::kSeedBre:
    case SamplerKind::kSeedVre:
      return &impl_->seeds;
    default:
      return nullptr;
  }
}

WeightedDraw Sampler::draw(RngStream& rng) const {
  if (impl_->kind != SamplerKind::kMixture) return draw_conditional({}, rng);
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t k = 0;
  for (; k + 1 < impl_->weights.size(); ++k) {
    acc += impl_->weights[k];
    if (u < acc) break;
  }
  WeightedDraw d = impl_->components[k].draw(rng);
  d.log_weight = log_config_prob(d.config, *impl_->topo) - log_density(d.config);
  d.sampler = SamplerKind::kMixture;
  return d;
}

WeightedDraw Sampler::draw_conditional(std::span<const ForcedStatus> forced, RngStream& rng) const {
  if (impl_->kind == SamplerKind::kMixture)
    throw InvalidArgument("conditional draws are not defined for mixtures");
  FailureConfig x(impl_->topo->link_count());
  for (const auto& f : forced) x.set(f.link, f.down);
  auto [log_q, log_p] = impl_->run(forced, [&](LinkId id, double lq1, double) {
    const bool down = rng.uniform() < std::exp(lq1);
    x.set(id, down);
    return down;
  });
  return WeightedDraw{std::move(x), log_p - log_q, impl_->kind};
}

double Sampler::log_density(const FailureConfig& x) const {
  if (x.size() != impl_->topo->link_count()) throw InvalidArgument("configuration length mismatch");
  if (impl_->kind == SamplerKind::kMixture) {
    std::vector<double> terms(impl_->components.size());
    for (std::size_t k = 0; k < terms.size(); ++k)
      terms[k] = impl_->log_weights[k] + impl_->components[k].log_density(x);
    return log_sum_exp(terms);
  }
  return log_density_conditional({}, x);
}

double Sampler::log_density_conditional(std::span<const ForcedStatus> forced, const FailureConfig& x) const {
  if (impl_->kind == SamplerKind::kMixture)
    throw InvalidArgument("conditional densities are not defined for mixtures");
  if (x.size() != impl_->topo->link_count()) throw InvalidArgument("configuration length mismatch");
  for (const auto& f : forced)
    if (x.is_down(f.link) != f.down) return kNegInf;
  auto [log_q, log_p] = impl_->run(forced, [&](LinkId id, double, double) { return x.is_down(id); });
  (void)log_p;
  return log_q;
}

double seed_rule_estimate(SamplerKind rule, const SeedCollection& cond_seeds, const Topology& topo,
                          std::size_t inclusion_exclusion_cap) {
  return estimate(rule, make_table(cond_seeds, topo), topo, inclusion_exclusion_cap);
}

std::vector<double> pilot_marginals(const Topology& topo, const Indicator& r, const SeedCollection& seeds,
                                    std::size_t n, RngStream& rng) {
  const auto sampler = Sampler::seed_vre(topo, seeds);
  std::vector<double> num(topo.link_count(), 0.0);
  double den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    auto d = sampler.draw(rng);
    if (!r(d.config)) continue;
    const double w = std::exp(d.log_weight);
    den += w;
    for (LinkId id = 1; id <= topo.link_count(); ++id)
      if (d.config.is_down(id)) num[id - 1] += w;
  }
  std::vector<double> q(topo.link_count());
  for (const auto& l : topo.links()) {
    const double est = den > 0.0 ? num[l.id - 1] / den : l.p;
    q[l.id - 1] = std::clamp(std::max(est, l.p), 0.0, 1.0);
  }
  return q;
}

}  // namespace fave
