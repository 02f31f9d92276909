#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fave/failure_config.h"
#include "fave/rng.h"
#include "fave/routing.h"
#include "fave/seed.h"
#include "fave/topology.h"

namespace fave {

enum class SamplerKind { kMonteCarlo, kBaselineIs, kSeedZv, kSeedBre, kSeedVre, kMixture };

std::string_view to_string(SamplerKind kind);  // "mc", "is", "seed-zv", ...
SamplerKind parse_sampler_kind(std::string_view name);

// A sampled configuration and log(p(x)/q(x)).
struct WeightedDraw {
  FailureConfig config;
  double log_weight = 0.0;
  SamplerKind sampler = SamplerKind::kMonteCarlo;
};

// A fixed link status imposed ahead of sequential sampling, used to
// estimate probabilities conditional on that status.
struct ForcedStatus {
  LinkId link = 0;
  bool down = true;
};

struct SeedSamplerOptions {
  // Sampling order as a permutation of 1..N_l; empty means ascending ids.
  std::vector<LinkId> order;
  // Largest cond-SEED collection SEED-ZV will run inclusion-exclusion on.
  std::size_t inclusion_exclusion_cap = 25;
};

// Immutable description of an importance distribution q over failure
// configurations of one topology. Copies share state; drawing needs only a
// caller-owned RngStream, so one Sampler serves many workers.
class Sampler {
 public:
  static Sampler monte_carlo(Topology topo);
  // Product-form q with q_i(1) = marginals[i-1]. A zero marginal on a link
  // with p_i > 0 throws SupportError.
  static Sampler baseline_is(Topology topo, std::vector<double> marginals);
  static Sampler seed_zv(Topology topo, SeedCollection seeds, SeedSamplerOptions options = {});
  static Sampler seed_bre(Topology topo, SeedCollection seeds, SeedSamplerOptions options = {});
  static Sampler seed_vre(Topology topo, SeedCollection seeds, SeedSamplerOptions options = {});
  static Sampler seed(SamplerKind kind, Topology topo, SeedCollection seeds,
                      SeedSamplerOptions options = {});
  // q(x) = sum_k w_k q_k(x). Weights must be positive and sum to 1.
  static Sampler mixture(std::vector<Sampler> components, std::vector<double> weights);
  static Sampler equal_mixture(std::vector<Sampler> components);

  SamplerKind kind() const;
  const Topology& topology() const;

  WeightedDraw draw(RngStream& rng) const;
  // Draw conditioned on forced statuses, which are sampled first and carry
  // no weight: the weight is p(rest)/q(rest). SEED samplers only.
  WeightedDraw draw_conditional(std::span<const ForcedStatus> forced, RngStream& rng) const;

  // log q(x); -inf outside the support. Deterministic replay of the draw.
  double log_density(const FailureConfig& x) const;
  double log_density_conditional(std::span<const ForcedStatus> forced, const FailureConfig& x) const;

  // Mixture introspection (empty for pure samplers).
  std::span<const Sampler> components() const;
  std::span<const double> weights() const;
  // SEED samplers: the SEED set; otherwise nullptr.
  const SeedCollection* seeds() const;

  struct Impl;

 private:
  explicit Sampler(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// log q(x) of any sampler (alias of Sampler::log_density).
inline double density(const Sampler& sampler, const FailureConfig& x) { return std::exp(sampler.log_density(x)); }

// Conditional-failure estimate P^[R=1 | prefix] under one of the SEED rules,
// applied to a cond-SEED collection: inclusion-exclusion (ZV), max (BRE) or
// clamped sum (VRE) of Phi over the members.
double seed_rule_estimate(SamplerKind rule, const SeedCollection& cond_seeds, const Topology& topo,
                          std::size_t inclusion_exclusion_cap = 25);

// Baseline-IS marginals estimated from n weighted SEED-VRE draws by
// self-normalized importance weighting of P[x_i=1 | R=1], floored at p_i.
std::vector<double> pilot_marginals(const Topology& topo, const Indicator& r,
                                    const SeedCollection& seeds, std::size_t n, RngStream& rng);

}  // namespace fave
