#include "fave/oracle.h"

#include <cmath>
#include <limits>

#include "fave/errors.h"
#include "fave/exhaustive.h"

namespace fave {
namespace {

std::uint64_t space_size(const Topology& topo, std::string_view what) {
  require_exhaustive(topo.link_count(), what);
  return 1ull << topo.link_count();
}

class Kahan {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

}  // namespace

double exact_mu(const Topology& topo, const Indicator& r) {
  const auto total = space_size(topo, "exact_mu");
  Kahan acc;
  for (std::uint64_t m = 0; m < total; ++m) {
    auto x = FailureConfig::from_mask(m, topo.link_count());
    const double p = config_prob(x, topo);
    if (p > 0.0 && r(x)) acc.add(p);
  }
  return acc.value();
}

double exact_mu(const Topology& topo, const FlowSet& flows, RoutingPolicy policy, FlowId flow_id) {
  return exact_mu(topo, flow_indicator(topo, flows, policy, flow_id));
}

double exact_conditional(const Topology& topo, const Indicator& r, std::span<const ForcedStatus> fixed) {
  const auto total = space_size(topo, "exact_conditional");
  const std::size_t n = topo.link_count();
  std::uint64_t care = 0, want = 0;
  for (const auto& f : fixed) {
    if (f.link == 0 || f.link > n) throw InvalidLinkId("fixed link outside the topology");
    care |= 1ull << (f.link - 1);
    if (f.down) want |= 1ull << (f.link - 1);
  }
  Kahan num, den;
  for (std::uint64_t m = 0; m < total; ++m) {
    if ((m & care) != want) continue;
    auto x = FailureConfig::from_mask(m, n);
    const double p = config_prob(x, topo);
    if (p == 0.0) continue;
    den.add(p);
    if (r(x)) num.add(p);
  }
  if (den.value() == 0.0) throw InvalidArgument("exact_conditional: conditioning event has probability 0");
  return num.value() / den.value();
}

double exact_conditional(const Topology& topo, const Indicator& r, const PrefixView& prefix) {
  std::vector<ForcedStatus> fixed;
  for (LinkId id = 1; id <= prefix.length(); ++id) fixed.push_back({id, prefix.is_down(id)});
  return exact_conditional(topo, r, fixed);
}

std::vector<double> exact_marginals(const Topology& topo, const Indicator& r) {
  const auto total = space_size(topo, "exact_marginal");
  const std::size_t n = topo.link_count();
  std::vector<Kahan> num(n);
  Kahan den;
  for (std::uint64_t m = 0; m < total; ++m) {
    auto x = FailureConfig::from_mask(m, n);
    const double p = config_prob(x, topo);
    if (p == 0.0 || !r(x)) continue;
    den.add(p);
    for (std::size_t k = 0; k < n; ++k)
      if (m >> k & 1u) num[k].add(p);
  }
  if (den.value() == 0.0) throw InvalidArgument("exact_marginal: mu = 0, P[x_i | R=1] undefined");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = num[k].value() / den.value();
  return out;
}

double exact_marginal(const Topology& topo, const Indicator& r, LinkId link) {
  topo.link(link);
  return exact_marginals(topo, r)[link - 1];
}

std::vector<double> optimal_distribution(const Topology& topo, const Indicator& r) {
  const auto total = space_size(topo, "optimal_distribution");
  std::vector<double> q(total, 0.0);
  Kahan mu;
  for (std::uint64_t m = 0; m < total; ++m) {
    auto x = FailureConfig::from_mask(m, topo.link_count());
    if (r(x)) {
      q[m] = config_prob(x, topo);
      mu.add(q[m]);
    }
  }
  if (mu.value() == 0.0) throw InvalidArgument("optimal distribution undefined when mu = 0");
  for (auto& v : q) v /= mu.value();
  return q;
}

std::vector<double> sampler_distribution(const Sampler& sampler) {
  const Topology& topo = sampler.topology();
  const auto total = space_size(topo, "sampler_distribution");
  std::vector<double> q(total);
  for (std::uint64_t m = 0; m < total; ++m)
    q[m] = std::exp(sampler.log_density(FailureConfig::from_mask(m, topo.link_count())));
  return q;
}

double exact_sampler_mean(const Sampler& sampler, const Indicator& r) {
  const Topology& topo = sampler.topology();
  const auto total = space_size(topo, "exact_sampler_mean");
  Kahan acc;
  for (std::uint64_t m = 0; m < total; ++m) {
    auto x = FailureConfig::from_mask(m, topo.link_count());
    const double lq = sampler.log_density(x);
    if (lq == -std::numeric_limits<double>::infinity() || !r(x)) continue;
    // q(x) R(x) w(x) = p(x) on the support of q
    acc.add(config_prob(x, topo));
  }
  return acc.value();
}

double exact_sampler_variance(const Sampler& sampler, const Indicator& r) {
  const Topology& topo = sampler.topology();
  const auto total = space_size(topo, "exact_sampler_variance");
  const std::size_t n = topo.link_count();
  std::vector<double> lq(total);
  std::vector<char> fails(total);
  Kahan mean;
  for (std::uint64_t m = 0; m < total; ++m) {
    auto x = FailureConfig::from_mask(m, n);
    lq[m] = sampler.log_density(x);
    fails[m] = r(x);
    if (!fails[m]) continue;
    const double lp = log_config_prob(x, topo);
    if (lp == -std::numeric_limits<double>::infinity()) continue;
    if (lq[m] == -std::numeric_limits<double>::infinity())
      throw SupportError("q(x) = 0 at x = " + x.to_string() + " where p(x)R(x) > 0");
    mean.add(std::exp(lp));
  }
  const double mu = mean.value();
  // sum_x q(x) (R(x)w(x) - mu)^2, stable when sigma << mu.
  Kahan var;
  for (std::uint64_t m = 0; m < total; ++m) {
    if (lq[m] == -std::numeric_limits<double>::infinity()) continue;
    const double q = std::exp(lq[m]);
    double value = 0.0;
    if (fails[m]) {
      const double lp = log_config_prob(FailureConfig::from_mask(m, n), topo);
      value = std::exp(lp - lq[m]);
    }
    const double d = value - mu;
    var.add(q * d * d);
  }
  return std::max(0.0, var.value());
}

double kl_divergence(std::span<const double> q_star, std::span<const double> q) {
  if (q_star.size() != q.size()) throw InvalidArgument("kl_divergence: size mismatch");
  Kahan acc;
  for (std::size_t m = 0; m < q.size(); ++m) {
    if (q_star[m] == 0.0) continue;
    if (q[m] == 0.0)
      throw SupportError("kl_divergence: q = 0 where q* > 0 (configuration index " + std::to_string(m) + ")");
    acc.add(q_star[m] * std::log(q_star[m] / q[m]));
  }
  return std::max(0.0, acc.value());
}

VarianceBoundReport variance_bound_check(const Sampler& sampler, const Indicator& r) {
  const Topology& topo = sampler.topology();
  VarianceBoundReport rep;
  rep.mu = exact_mu(topo, r);
  rep.exact = exact_sampler_variance(sampler, r);
  if (rep.mu == 0.0) {
    rep.lower_holds = rep.upper_holds = true;
    return rep;
  }
  const auto q_star = optimal_distribution(topo, r);
  const auto q = sampler_distribution(sampler);
  rep.kl_nats = kl_divergence(q_star, q);
  rep.min_q = std::numeric_limits<double>::infinity();
  for (double v : q)
    if (v > 0.0) rep.min_q = std::min(rep.min_q, v);
  const double mu2 = rep.mu * rep.mu;
  rep.lower = mu2 * rep.kl_nats;
  const double kl_bits = rep.kl_nats / std::log(2.0);
  rep.upper = mu2 * std::sqrt(2.0 * std::log(2.0) * kl_bits) / rep.min_q;
  const double slack = 1e-12 * mu2;
  rep.lower_holds = rep.lower <= rep.exact + slack;
  rep.upper_holds = rep.exact <= rep.upper + slack;
  return rep;
}

ExactReport exact_report(const Topology& topo, const Indicator& r, std::span<const Sampler> samplers) {
  const auto total = space_size(topo, "exact_report");
  const std::size_t n = topo.link_count();
  ExactReport rep;
  rep.mu = exact_mu(topo, r);
  std::vector<double> q_star;
  if (rep.mu > 0.0) q_star = optimal_distribution(topo, r);
  std::vector<std::vector<double>> qs;
  for (const auto& s : samplers) {
    ExactSamplerStats st;
    st.name = std::string(to_string(s.kind()));
    st.mean = exact_sampler_mean(s, r);
    st.variance = exact_sampler_variance(s, r);
    st.cv = rep.mu > 0.0 ? std::sqrt(st.variance) / rep.mu : 0.0;
    qs.push_back(sampler_distribution(s));
    if (!q_star.empty()) st.kl_nats = kl_divergence(q_star, qs.back());
    rep.samplers.push_back(st);
  }
  for (std::uint64_t m = 0; m < total; ++m) {
    auto x = FailureConfig::from_mask(m, n);
    ExactConfigRow row{x, config_prob(x, topo), r(x), {}};
    bool any = row.p > 0.0;
    for (const auto& q : qs) {
      row.q.push_back(q[m]);
      any = any || q[m] > 0.0;
    }
    if (any) rep.table.push_back(std::move(row));
  }
  return rep;
}

}  // namespace fave
