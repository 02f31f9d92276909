#include "fave/estimate.h"

#include <atomic>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <thread>

#include "fave/errors.h"

namespace fave {

void EstimateSummary::add(double value) {
  ++n;
  const double delta = value - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (value - mean);
}

double EstimateSummary::one_run_var() const {
  if (n < 2) return 0.0;
  return std::max(0.0, m2 / static_cast<double>(n - 1));
}

double EstimateSummary::cv() const {
  const double sd = std::sqrt(one_run_var());
  if (mean == 0.0) return sd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return sd / mean;
}

double EstimateSummary::half_width() const {
  if (n == 0) return 0.0;
  return z_quantile(confidence) * std::sqrt(one_run_var() / static_cast<double>(n));
}

EstimateSummary merge(const EstimateSummary& a, const EstimateSummary& b) {
  if (a.flow_id != b.flow_id || a.method != b.method)
    throw InvalidArgument("cannot merge summaries of different flows or methods");
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  EstimateSummary out = a;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double n = na + nb;
  const double delta = b.mean - a.mean;
  out.n = a.n + b.n;
  out.mean = a.mean + delta * nb / n;
  out.m2 = a.m2 + b.m2 + delta * delta * na * nb / n;
  return out;
}

double z_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must be in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + confidence / 2.0);
}

std::uint64_t required_samples(double sigma, double delta, double alpha, std::optional<double> mu) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be >= 0");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  double width = delta;
  if (mu) {
    if (*mu == 0.0) throw InvalidArgument("relative sample size needs a non-zero mean");
    width = delta * std::abs(*mu);
  }
  const double root = 2.0 * alpha * sigma / width;
  const double n = std::ceil(root * root * (1.0 - 1e-12));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

namespace {

// Runs `body(block_index, rng, begin, count)` over fixed-size blocks and
// returns the per-block results in block order.
template <typename Result, typename Body>
std::vector<Result> run_blocks(const EstimateOptions& options, Body&& body) {
  if (options.samples == 0) throw InvalidArgument("estimate needs at least one draw");
  const std::uint64_t block = std::max<std::uint64_t>(1, options.block_size);
  const std::uint64_t n_blocks = (options.samples + block - 1) / block;
  std::vector<Result> results(n_blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next++; b < n_blocks; b = next++) {
      RngStream rng(options.seed, b);
      const std::uint64_t begin = b * block;
      const std::uint64_t count = std::min(block, options.samples - begin);
      results[b] = body(rng, count);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(options.workers, n_blocks));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace

EstimateSummary estimate(const Sampler& sampler, const Indicator& r, FlowId flow_id,
                         const EstimateOptions& options) {
  auto blocks = run_blocks<EstimateSummary>(options, [&](RngStream& rng, std::uint64_t count) {
    EstimateSummary s{flow_id, std::string(to_string(sampler.kind())), options.confidence};
    for (std::uint64_t k = 0; k < count; ++k) {
      auto d = sampler.draw(rng);
      s.add(r(d.config) ? std::exp(d.log_weight) : 0.0);
    }
    return s;
  });
  EstimateSummary total{flow_id, std::string(to_string(sampler.kind())), options.confidence};
  for (const auto& b : blocks) total = merge(total, b);
  return total;
}

EstimateSummary estimate(const Sampler& sampler, const FlowSet& flows, RoutingPolicy policy,
                         FlowId flow_id, const EstimateOptions& options) {
  return estimate(sampler, flow_indicator(sampler.topology(), flows, policy, flow_id), flow_id, options);
}

std::vector<EstimateSummary> estimate_multi(const Sampler& sampler, const MultiIndicator& r,
                                            const std::vector<FlowId>& flow_ids,
                                            const EstimateOptions& options) {
  const std::string method(to_string(sampler.kind()));
  auto fresh = [&] {
    std::vector<EstimateSummary> v;
    v.reserve(flow_ids.size());
    for (FlowId id : flow_ids) v.push_back(EstimateSummary{id, method, options.confidence});
    return v;
  };
  auto blocks = run_blocks<std::vector<EstimateSummary>>(options, [&](RngStream& rng, std::uint64_t count) {
    auto s = fresh();
    for (std::uint64_t k = 0; k < count; ++k) {
      auto d = sampler.draw(rng);
      auto failed = r(d.config);
      const double w = std::exp(d.log_weight);
      for (std::size_t f = 0; f < s.size(); ++f) s[f].add(failed[f] ? w : 0.0);
    }
    return s;
  });
  auto total = fresh();
  for (const auto& b : blocks)
    for (std::size_t f = 0; f < total.size(); ++f) total[f] = merge(total[f], b[f]);
  return total;
}

std::vector<EstimateSummary> estimate_multi(const Sampler& sampler, const FlowSet& flows,
                                            RoutingPolicy policy, const EstimateOptions& options) {
  const Topology& topo = sampler.topology();
  std::vector<FlowId> ids;
  for (const auto& f : flows) ids.push_back(f.id);
  return estimate_multi(
      sampler, [&](const FailureConfig& x) { return evaluate_all(topo, x, flows, policy); }, ids, options);
}

}  // namespace fave
