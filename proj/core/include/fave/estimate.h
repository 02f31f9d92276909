#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fave/routing.h"
#include "fave/sampler.h"

namespace fave {

// Streaming statistics of the per-draw values R(x)w(x) for one flow.
// Pairwise-mergeable (Chan et al. update), so parallel partial runs can be
// reduced in any grouping.
struct EstimateSummary {
  FlowId flow_id = 0;
  std::string method;
  double confidence = 0.95;
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations from the mean

  void add(double value);
  // Unbiased sample variance of a single draw (the one-run variance).
  double one_run_var() const;
  // sigma / mean; +inf when the mean is 0 and the variance is not.
  double cv() const;
  double half_width() const;
  std::pair<double, double> ci() const { return {mean - half_width(), mean + half_width()}; }
};

// Throws InvalidArgument when flow or method differ (empty summaries merge
// with anything).
EstimateSummary merge(const EstimateSummary& a, const EstimateSummary& b);

// Two-sided standard-normal quantile: 1.96 for 0.95.
double z_quantile(double confidence);

// Draws needed so the CI width 2*alpha*sigma/sqrt(N) is at most delta
// (absolute) or delta*mu (relative, when mu is given). Returns at least 1.
std::uint64_t required_samples(double sigma, double delta, double alpha,
                               std::optional<double> mu = std::nullopt);

struct EstimateOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  double confidence = 0.95;
  // Draws per RNG stream. Streams are indexed by block, so results do not
  // depend on the worker count.
  std::uint64_t block_size = 4096;
};

// Per-draw failure flags for every tracked flow.
using MultiIndicator = std::function<std::vector<char>(const FailureConfig&)>;

// mu^ = (1/N) sum R(x)w(x) with x drawn from `sampler`.
EstimateSummary estimate(const Sampler& sampler, const Indicator& r, FlowId flow_id,
                         const EstimateOptions& options);
EstimateSummary estimate(const Sampler& sampler, const FlowSet& flows, RoutingPolicy policy,
                         FlowId flow_id, const EstimateOptions& options);

// One stream of draws; each draw's R_k(x)w(x) is accumulated into every
// flow k's summary. Summaries come back in `flow_ids` order.
std::vector<EstimateSummary> estimate_multi(const Sampler& sampler, const MultiIndicator& r,
                                            const std::vector<FlowId>& flow_ids,
                                            const EstimateOptions& options);
std::vector<EstimateSummary> estimate_multi(const Sampler& sampler, const FlowSet& flows,
                                            RoutingPolicy policy, const EstimateOptions& options);

}  // namespace fave
