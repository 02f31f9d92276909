#pragma once

#include <span>
#include <string>
#include <vector>

#include "fave/failure_config.h"
#include "fave/routing.h"
#include "fave/sampler.h"
#include "fave/topology.h"

namespace fave {

// Exact reference computations by enumerating all 2^N_l configurations.
// Every entry point refuses (LimitExceeded) above exhaustive_limit().
// Distributions over configurations are vectors indexed by the bit mask
// of FailureConfig::from_mask.

// mu = sum_x p(x) R(x)
double exact_mu(const Topology& topo, const Indicator& r);
double exact_mu(const Topology& topo, const FlowSet& flows, RoutingPolicy policy, FlowId flow_id);

// P[R=1 | fixed statuses]. Throws InvalidArgument when the statuses have
// probability zero.
double exact_conditional(const Topology& topo, const Indicator& r, std::span<const ForcedStatus> fixed);
// P[R=1 | x_{1:i}] for a prefix view.
double exact_conditional(const Topology& topo, const Indicator& r, const PrefixView& prefix);

// P[x_i = 1 | R = 1]. Throws InvalidArgument when mu = 0.
double exact_marginal(const Topology& topo, const Indicator& r, LinkId link);
std::vector<double> exact_marginals(const Topology& topo, const Indicator& r);

// q*(x) = p(x) R(x) / mu.
std::vector<double> optimal_distribution(const Topology& topo, const Indicator& r);
// q(x) of any sampler over all configurations.
std::vector<double> sampler_distribution(const Sampler& sampler);

// E_q[R w] summed over the support of q. Equals mu iff q covers every x
// with p(x) R(x) > 0.
double exact_sampler_mean(const Sampler& sampler, const Indicator& r);
// One-run variance sigma_q^2 = V_q[R(x) w(x)]. Throws SupportError naming the
// first configuration with p(x)R(x) > 0 but q(x) = 0.
double exact_sampler_variance(const Sampler& sampler, const Indicator& r);

// KL(q* || q) in nats. Throws SupportError when q = 0 where q* > 0.
double kl_divergence(std::span<const double> q_star, std::span<const double> q);

struct VarianceBoundReport {
  double mu = 0.0;
  double kl_nats = 0.0;
  double lower = 0.0;     // mu^2 KL(q*||q)
  double exact = 0.0;     // sigma_q^2
  double upper = 0.0;     // mu^2 sqrt(2 ln2 KL_bits) / min_{q>0} q(x); reported only
  double min_q = 0.0;     // smallest positive q(x)
  bool lower_holds = false;
  bool upper_holds = false;
};
// One-run (N = 1) form of the baseline-IS variance bounds.
VarianceBoundReport variance_bound_check(const Sampler& sampler, const Indicator& r);

struct ExactConfigRow {
  FailureConfig config;
  double p = 0.0;
  bool failed = false;
  std::vector<double> q;  // per sampler, same order as ExactReport::samplers
};

struct ExactSamplerStats {
  std::string name;
  double mean = 0.0;
  double variance = 0.0;
  double cv = 0.0;
  double kl_nats = 0.0;
};

struct ExactReport {
  double mu = 0.0;
  std::vector<ExactSamplerStats> samplers;
  std::vector<ExactConfigRow> table;  // only rows where p(x) > 0 or some q(x) > 0
};

ExactReport exact_report(const Topology& topo, const Indicator& r, std::span<const Sampler> samplers);

}  // namespace fave
