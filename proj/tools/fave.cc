// fave: batch front end for flow-availability estimation.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fave/errors.h"
#include "fave/estimate.h"
#include "fave/exhaustive.h"
#include "fave/io.h"
#include "fave/oracle.h"
#include "fave/planning.h"
#include "fave/routing.h"
#include "fave/sampler.h"
#include "fave/seed.h"
#include "fave/workflow.h"

#ifndef FAVE_VERSION
#define FAVE_VERSION "unknown"
#endif

namespace {

using namespace fave;
using ordered = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kOther = 1, kParse = 2, kSupport = 3, kUndecided = 4 };

// Raised for invalid command-line combinations; reported like a parse error.
struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string topology;
  std::string flows;
  std::string seeds;
  bool enumerate = false;
  std::string method = "seed-vre";
  std::string component = "seed-vre";
  std::string weights = "equal";
  std::string policy = "shortest-path-maxmin";
  std::vector<FlowId> flow_ids;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  double confidence = 0.95;
  double delta = 0.1;
  std::string delta_mode = "rel";
  std::size_t workers = 1;
  std::string output;
  bool compare_mc = false;
  // collect-seeds
  double inflation = 1.0;
  // plan-*
  std::string metric = "all";
  double unit = 1.0;
  std::vector<FlowId> unmet;
  std::vector<std::string> proposals;
  std::uint64_t batch = 2000;
  std::uint64_t budget = 200000;
  std::string ccdf;
  // oracle-check
  std::vector<std::string> methods;
};

std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join_ids(const std::vector<FlowId>& ids) {
  std::string out;
  for (auto id : ids) out += (out.empty() ? "" : " ") + std::to_string(id);
  return out;
}

Provenance provenance(const RunConfig& c) {
  Provenance p{{"tool", "fave"}, {"version", FAVE_VERSION}, {"command", c.command}};
  auto add = [&](const char* k, const std::string& v) {
    if (!v.empty()) p.emplace_back(k, v);
  };
  add("topology", c.topology);
  add("flows", c.flows);
  add("seeds", c.seeds);
  if (c.enumerate) add("enumerate", "true");
  add("policy", c.policy);
  if (c.command == "estimate" || c.command == "estimate-multi") {
    add("method", c.method);
    if (c.method == "mixture" || c.command == "estimate-multi") add("component", c.component);
    if (c.method == "mixture") add("weights", c.weights);
    add("samples", std::to_string(c.samples));
    add("confidence", num(c.confidence));
    add("delta", num(c.delta));
    add("delta_mode", c.delta_mode);
    add("workers", std::to_string(c.workers));
    if (c.compare_mc) add("compare_mc", "true");
  }
  if (c.command == "collect-seeds") {
    add("samples", std::to_string(c.samples));
    add("inflation", num(c.inflation));
  }
  if (c.command == "plan-rank") {
    add("metric", c.metric);
    add("unit", num(c.unit));
    add("unmet", join_ids(c.unmet));
    add("samples", std::to_string(c.samples));
  }
  if (c.command == "plan-eval") {
    add("method", c.component);
    add("batch", std::to_string(c.batch));
    add("budget", std::to_string(c.budget));
    add("confidence", num(c.confidence));
    add("workers", std::to_string(c.workers));
  }
  add("flow", join_ids(c.flow_ids));
  p.emplace_back("rng_seed", std::to_string(c.seed));
  return p;
}

ordered provenance_json(const RunConfig& c) {
  ordered j = ordered::object();
  for (const auto& [k, v] : provenance(c)) j[k] = v;
  return j;
}

// Writes to the output path, or stdout when none is given.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string sibling_json(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".json");
  return p.string();
}

struct Inputs {
  Topology topo;
  FlowSet flows;
  RoutingPolicy policy;
};

Inputs load(const RunConfig& c) {
  if (c.topology.empty()) throw UsageError("--topology is required");
  if (c.flows.empty()) throw UsageError("--flows is required");
  return {read_topology(c.topology), read_flows(c.flows), parse_routing_policy(c.policy)};
}

// SEED collections in FlowSet order: from file, by enumeration, or empty.
std::vector<SeedCollection> load_seeds(const RunConfig& c, const Inputs& in, bool required) {
  if (!c.seeds.empty()) return align_seeds(in.flows, read_seeds(c.seeds));
  if (c.enumerate) return enumerate_all_seeds(in.topo, in.flows, in.policy);
  if (required) throw UsageError("SEED methods need --seeds FILE or --enumerate");
  return std::vector<SeedCollection>(in.flows.size());
}

bool needs_seeds(SamplerKind k) {
  return k == SamplerKind::kSeedZv || k == SamplerKind::kSeedBre || k == SamplerKind::kSeedVre;
}

std::vector<FlowId> selected_flows(const RunConfig& c, const FlowSet& flows) {
  if (!c.flow_ids.empty()) {
    for (auto id : c.flow_ids) (void)flows.index_of(id);
    return c.flow_ids;
  }
  std::vector<FlowId> ids;
  for (const auto& f : flows) ids.push_back(f.id);
  return ids;
}

EstimateOptions estimate_options(const RunConfig& c) {
  EstimateOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.workers = c.workers;
  o.confidence = c.confidence;
  return o;
}

Sampler weighted_mixture(std::vector<Sampler> comps, const std::string& weights) {
  if (weights == "equal") return Sampler::equal_mixture(std::move(comps));
  std::vector<double> w;
  std::stringstream ss(weights);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("--weights: expected 'equal' or a comma-separated list, got '" + weights + "'");
    }
  }
  return Sampler::mixture(std::move(comps), std::move(w));
}

ordered summary_json(const EstimateSummary& s, const RunConfig& c) {
  ordered j;
  j["flow_id"] = s.flow_id;
  j["method"] = s.method;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["one_run_var"] = s.one_run_var();
  const double cv = s.cv();
  j["cv"] = std::isfinite(cv) ? ordered(cv) : ordered(nullptr);
  j["ci"] = {s.ci().first, s.ci().second};
  const double sigma = std::sqrt(s.one_run_var());
  const double z = z_quantile(c.confidence);
  if (c.delta_mode == "abs") {
    j["required_n"] = required_samples(sigma, c.delta, z);
  } else if (s.mean > 0) {
    j["required_n"] = required_samples(sigma, c.delta, z, s.mean);
  } else {
    j["required_n"] = nullptr;
  }
  return j;
}

ordered ratio_or_null(double num_, double den) {
  if (!(den > 0)) return nullptr;
  return num_ / den;
}

void write_estimates(const RunConfig& c, const std::vector<EstimateSummary>& results,
                     const std::vector<EstimateSummary>& mc) {
  std::vector<ResultRow> rows;
  for (const auto& s : results) rows.push_back(to_row(s));
  for (const auto& s : mc) rows.push_back(to_row(s));
  std::ostringstream csv;
  write_results_csv(csv, rows, provenance(c));
  emit(c.output, csv.str());

  ordered doc;
  doc["provenance"] = provenance_json(c);
  ordered flows = ordered::array();
  for (std::size_t k = 0; k < results.size(); ++k) {
    ordered f = summary_json(results[k], c);
    if (!mc.empty()) {
      const double m = results[k].mean;
      f["mc_one_run_var"] = mc[k].one_run_var();
      f["variance_reduction"] = mc[k].one_run_var() > 0 ? ratio_or_null(mc[k].one_run_var(), results[k].one_run_var())
                                                         : ordered(nullptr);
      // Bernoulli variance at the shared mean, for when MC saw no failures.
      f["variance_reduction_bernoulli"] = ratio_or_null(m * (1 - m), results[k].one_run_var());
    }
    flows.push_back(std::move(f));
  }
  doc["flows"] = std::move(flows);
  const std::string text = doc.dump(2) + "\n";
  if (c.output.empty() || c.output == "-")
    std::cerr << text;
  else
    emit(sibling_json(c.output), text);
}

void check_estimate_config(const RunConfig& c) {
  if (c.samples == 0) throw UsageError("--samples must be positive");
  if (!(c.confidence > 0 && c.confidence < 1)) throw UsageError("--confidence must lie in (0,1)");
  if (!(c.delta > 0)) throw UsageError("--delta must be positive");
  if (c.workers == 0) throw UsageError("--workers must be positive");
}

std::vector<EstimateSummary> paired_mc(const RunConfig& c, const Inputs& in, const std::vector<FlowId>& ids) {
  if (!c.compare_mc) return {};
  auto mc = Sampler::monte_carlo(in.topo);
  auto r = [&](const FailureConfig& x) {
    auto all = evaluate_all(in.topo, x, in.flows, in.policy);
    std::vector<char> out;
    for (auto id : ids) out.push_back(all[in.flows.index_of(id)]);
    return out;
  };
  return estimate_multi(mc, r, ids, estimate_options(c));
}

int cmd_estimate(const RunConfig& c) {
  check_estimate_config(c);
  auto in = load(c);
  const auto kind = parse_sampler_kind(c.method);
  const auto ids = selected_flows(c, in.flows);
  std::vector<EstimateSummary> results;
  if (kind == SamplerKind::kMixture) {
    const auto comp = parse_sampler_kind(c.component);
    if (comp == SamplerKind::kMixture) throw UsageError("--component must be a pure method");
    auto seeds = load_seeds(c, in, needs_seeds(comp));
    std::vector<Sampler> parts;
    for (std::size_t k = 0; k < in.flows.size(); ++k)
      parts.push_back(build_flow_sampler(comp, in.topo, in.flows, in.policy, in.flows[k].id, seeds[k], 2000, c.seed));
    auto mix = weighted_mixture(std::move(parts), c.weights);
    auto all = estimate_multi(mix, in.flows, in.policy, estimate_options(c));
    for (auto id : ids) results.push_back(all[in.flows.index_of(id)]);
  } else {
    auto seeds = load_seeds(c, in, needs_seeds(kind));
    for (auto id : ids) {
      const auto k = in.flows.index_of(id);
      auto s = build_flow_sampler(kind, in.topo, in.flows, in.policy, id, seeds[k], 2000, c.seed);
      results.push_back(estimate(s, in.flows, in.policy, id, estimate_options(c)));
    }
  }
  write_estimates(c, results, paired_mc(c, in, ids));
  return kOk;
}

int cmd_estimate_multi(const RunConfig& c) {
  check_estimate_config(c);
  auto in = load(c);
  const auto comp = parse_sampler_kind(c.component);
  if (comp == SamplerKind::kMixture) throw UsageError("--component must be a pure method");
  auto seeds = load_seeds(c, in, needs_seeds(comp));
  auto mix = build_flow_mixture(comp, in.topo, in.flows, in.policy, seeds, 2000, c.seed);
  auto all = estimate_multi(mix, in.flows, in.policy, estimate_options(c));
  const auto ids = selected_flows(c, in.flows);
  std::vector<EstimateSummary> results;
  for (auto id : ids) results.push_back(all[in.flows.index_of(id)]);
  write_estimates(c, results, paired_mc(c, in, ids));
  return kOk;
}

int cmd_enumerate_seeds(const RunConfig& c) {
  auto in = load(c);
  if (in.topo.link_count() > exhaustive_limit()) {
    throw LimitExceeded("enumerate-seeds: " + std::to_string(in.topo.link_count()) +
                        " links exceed the exhaustive limit of " + std::to_string(exhaustive_limit()) +
                        "; use collect-seeds instead (or raise FAVE_EXHAUSTIVE_LIMIT)");
  }
  auto colls = enumerate_all_seeds(in.topo, in.flows, in.policy);
  emit(c.output, seeds_to_json(colls));
  return kOk;
}

int cmd_collect_seeds(const RunConfig& c) {
  auto in = load(c);
  auto initial = c.seeds.empty() ? std::vector<SeedCollection>(in.flows.size())
                                 : align_seeds(in.flows, read_seeds(c.seeds));
  auto res = collect_seeds(in.topo, in.flows, in.policy, std::move(initial), {c.samples, c.inflation, c.seed});
  emit(c.output, seeds_to_json(res.collections));
  const auto& d = res.diagnostics;
  std::cerr << "draws=" << c.samples << " observed_failures=" << d.observed_failures
            << " already_spanned=" << d.already_spanned << " insertions=" << d.insertions
            << " contradictions=" << d.contradictions << " coverage=" << num(res.coverage()) << "\n";
  return kOk;
}

int cmd_plan_rank(const RunConfig& c) {
  auto in = load(c);
  const bool all = c.metric == "all";
  std::vector<RankingRow> rows;
  auto append = [&](const LinkRanking& r) {
    auto add = to_rows(r);
    rows.insert(rows.end(), add.begin(), add.end());
  };
  if (all || c.metric == "utilization") append(rank_utilization(in.topo, in.flows));
  if (all || c.metric == "maxflow-delta") append(rank_maxflow_delta(in.topo, in.flows, c.unit));
  if (all || c.metric == "seed-importance") {
    std::vector<SeedCollection> seeds;
    if (!c.seeds.empty() || c.enumerate)
      seeds = load_seeds(c, in, true);
    else if (in.topo.link_count() <= exhaustive_limit())
      seeds = enumerate_all_seeds(in.topo, in.flows, in.policy);
    else
      seeds = collect_seeds(in.topo, in.flows, in.policy, {}, {20000, 20.0, c.seed}).collections;
    auto unmet = c.unmet.empty() ? selected_flows(c, in.flows) : c.unmet;
    SeedImportanceOptions opt;
    opt.draws = c.samples;
    opt.seed = c.seed;
    append(rank_seed_importance(in.topo, in.flows, in.policy, unmet, seeds, opt));
  }
  if (!all && rows.empty() && c.metric != "utilization" && c.metric != "maxflow-delta")
    throw UsageError("unknown metric '" + c.metric + "'");
  std::ostringstream csv;
  write_ranking_csv(csv, rows, provenance(c));
  emit(c.output, csv.str());
  return kOk;
}

int cmd_plan_eval(const RunConfig& c) {
  if (c.flows.empty()) throw UsageError("--flows is required");
  if (c.proposals.empty()) throw UsageError("at least one --proposal is required");
  auto flows = read_flows(c.flows);
  const auto policy = parse_routing_policy(c.policy);
  EvaluationOptions opt;
  opt.method = parse_sampler_kind(c.component);
  opt.batch = c.batch;
  opt.budget = c.budget;
  opt.seed = c.seed;
  opt.confidence = c.confidence;
  opt.workers = c.workers;
  std::vector<FeasibilityReport> reports;
  for (const auto& path : c.proposals) reports.push_back(evaluate_proposal(read_proposal(path), flows, policy, opt));
  std::ostringstream csv;
  write_feasibility_csv(csv, reports, provenance(c));
  emit(c.output, csv.str());
  if (!c.ccdf.empty()) {
    std::ostringstream out;
    write_availability_ccdf(out, reports, provenance(c));
    emit(c.ccdf, out.str());
  }
  for (const auto& r : reports)
    if (r.undecided() > 0) return kUndecided;
  return kOk;
}

int cmd_oracle_check(const RunConfig& c) {
  auto in = load(c);
  if (c.flow_ids.size() > 1) throw UsageError("oracle-check takes a single --flow");
  const FlowId id = c.flow_ids.empty() ? in.flows[0].id : c.flow_ids[0];
  const auto k = in.flows.index_of(id);
  auto methods = c.methods;
  if (methods.empty()) methods = {"mc", "is", "seed-zv", "seed-bre", "seed-vre"};
  std::vector<SeedCollection> seeds;
  if (!c.seeds.empty())
    seeds = align_seeds(in.flows, read_seeds(c.seeds));
  else {
    seeds.resize(in.flows.size());
    seeds[k] = enumerate_seeds(in.topo, in.flows, id, in.policy);
  }
  std::vector<Sampler> samplers;
  for (const auto& m : methods) {
    auto kind = parse_sampler_kind(m);
    if (kind == SamplerKind::kMixture) throw UsageError("oracle-check compares pure methods");
    samplers.push_back(build_flow_sampler(kind, in.topo, in.flows, in.policy, id, seeds[k], 2000, c.seed));
  }
  auto report = exact_report(in.topo, flow_indicator(in.topo, in.flows, in.policy, id), samplers);
  emit(c.output, exact_report_to_json(report, provenance(c)));
  return kOk;
}

void add_inputs(CLI::App* sub, RunConfig& c) {
  sub->add_option("-t,--topology", c.topology, "topology JSON file");
  sub->add_option("-f,--flows", c.flows, "flows JSON file");
  sub->add_option("--policy", c.policy, "routing policy")
      ->check(CLI::IsMember({"shortest-path-maxmin", "max-flow", "connectivity"}));
  sub->add_option("--seed", c.seed, "master RNG seed");
  sub->add_option("-o,--output", c.output, "output file (default stdout)");
}

void add_seed_source(CLI::App* sub, RunConfig& c) {
  sub->add_option("-s,--seeds", c.seeds, "SEED JSON file");
  sub->add_flag("--enumerate", c.enumerate, "enumerate SEED sets exactly (small nets only)");
}

void add_estimation(CLI::App* sub, RunConfig& c) {
  sub->add_option("-n,--samples", c.samples, "number of draws");
  sub->add_option("--confidence", c.confidence, "confidence level");
  sub->add_option("--delta", c.delta, "target CI width for required-N projections");
  sub->add_option("--delta-mode", c.delta_mode, "abs or rel")->check(CLI::IsMember({"abs", "rel"}));
  sub->add_option("-j,--workers", c.workers, "worker threads");
  sub->add_option("--flow", c.flow_ids, "flow ids to report (default all)");
  sub->add_flag("--compare-mc", c.compare_mc, "run a paired MC estimate and report variance reduction");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"fave: flow availability estimation under random link failures"};
  app.set_version_flag("--version", std::string(FAVE_VERSION));
  app.require_subcommand(1);
  const std::vector<std::string> methods{"mc", "is", "seed-zv", "seed-bre", "seed-vre", "mixture"};
  const std::vector<std::string> pure{"mc", "is", "seed-zv", "seed-bre", "seed-vre"};

  auto* est = app.add_subcommand("estimate", "estimate per-flow unavailability");
  add_inputs(est, c);
  add_seed_source(est, c);
  add_estimation(est, c);
  est->add_option("-m,--method", c.method, "sampling method")->check(CLI::IsMember(methods));
  est->add_option("--component", c.component, "per-flow component for --method mixture")->check(CLI::IsMember(pure));
  est->add_option("--weights", c.weights, "mixture weights: equal or w1,w2,...");

  auto* multi = app.add_subcommand("estimate-multi", "all flows from one mixture of per-flow distributions");
  add_inputs(multi, c);
  add_seed_source(multi, c);
  add_estimation(multi, c);
  multi->add_option("-m,--method", c.component, "per-flow component method")->check(CLI::IsMember(pure));

  auto* enumerate = app.add_subcommand("enumerate-seeds", "exact SEED sets by enumeration");
  add_inputs(enumerate, c);

  auto* collect = app.add_subcommand("collect-seeds", "SEED sets by SEED-Updating over sampled configurations");
  add_inputs(collect, c);
  collect->add_option("-s,--seeds", c.seeds, "initial SEED JSON file");
  collect->add_option("-n,--samples", c.samples, "number of draws");
  collect->add_option("--inflation", c.inflation, "failure-probability inflation factor")
      ->check(CLI::PositiveNumber);

  auto* rank = app.add_subcommand("plan-rank", "rank links for capacity planning");
  add_inputs(rank, c);
  add_seed_source(rank, c);
  rank->add_option("--metric", c.metric, "utilization, maxflow-delta, seed-importance or all")
      ->check(CLI::IsMember({"all", "utilization", "maxflow-delta", "seed-importance"}));
  rank->add_option("--unit", c.unit, "capacity unit removed per link for maxflow-delta");
  rank->add_option("--unmet", c.unmet, "flows whose target is unmet (default all)");
  rank->add_option("-n,--samples", c.samples, "draws per link for seed-importance");

  auto* eval = app.add_subcommand("plan-eval", "check proposals against per-flow availability targets");
  eval->add_option("-f,--flows", c.flows, "flows JSON file");
  eval->add_option("--policy", c.policy, "routing policy")
      ->check(CLI::IsMember({"shortest-path-maxmin", "max-flow", "connectivity"}));
  eval->add_option("-p,--proposal", c.proposals, "proposal JSON file (repeatable)");
  eval->add_option("-m,--method", c.component, "per-flow component method")->check(CLI::IsMember(pure));
  eval->add_option("--batch", c.batch, "draws per round");
  eval->add_option("--budget", c.budget, "maximum draws per proposal");
  eval->add_option("--confidence", c.confidence, "confidence level");
  eval->add_option("-j,--workers", c.workers, "worker threads");
  eval->add_option("--seed", c.seed, "master RNG seed");
  eval->add_option("-o,--output", c.output, "feasibility CSV (default stdout)");
  eval->add_option("--ccdf", c.ccdf, "availability CCDF CSV");

  auto* oracle = app.add_subcommand("oracle-check", "exact report for one flow by enumeration");
  add_inputs(oracle, c);
  oracle->add_option("-s,--seeds", c.seeds, "SEED JSON file (default: enumerate)");
  oracle->add_option("--flow", c.flow_ids, "flow id (default first flow)");
  oracle->add_option("-m,--method", c.methods, "methods to compare (repeatable)")->check(CLI::IsMember(pure));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    if (c.command == "estimate") return cmd_estimate(c);
    if (c.command == "estimate-multi") return cmd_estimate_multi(c);
    if (c.command == "enumerate-seeds") return cmd_enumerate_seeds(c);
    if (c.command == "collect-seeds") return cmd_collect_seeds(c);
    if (c.command == "plan-rank") return cmd_plan_rank(c);
    if (c.command == "plan-eval") return cmd_plan_eval(c);
    if (c.command == "oracle-check") return cmd_oracle_check(c);
  } catch (const ParseError& e) {
    std::cerr << "fave: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "fave: " << e.what() << "\n";
    return kParse;
  } catch (const SupportError& e) {
    std::cerr << "fave: support error: " << e.what() << "\nconfiguration:\n";
    for (const auto& [k, v] : provenance(c)) std::cerr << "  " << k << "=" << v << "\n";
    return kSupport;
  } catch (const std::exception& e) {
    std::cerr << "fave: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
