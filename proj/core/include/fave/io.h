#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fave/estimate.h"
#include "fave/oracle.h"
#include "fave/planning.h"
#include "fave/routing.h"
#include "fave/seed.h"
#include "fave/topology.h"

namespace fave {

// JSON readers throw ParseError naming the source and either "line L, column C"
// for syntax errors or a field path such as "links[2].p" for schema errors.

Topology parse_topology(std::string_view text, const std::string& source = "topology");
Topology read_topology(const std::filesystem::path& path);
std::string topology_to_json(const Topology& topo);

FlowSet parse_flows(std::string_view text, const std::string& source = "flows");
FlowSet read_flows(const std::filesystem::path& path);
std::string flows_to_json(const FlowSet& flows);

// Array of {"flow_id", "seeds"} records; a single record is also accepted.
std::vector<SeedCollection> parse_seeds(std::string_view text, const std::string& source = "seeds");
std::vector<SeedCollection> read_seeds(const std::filesystem::path& path);
std::string seeds_to_json(std::span<const SeedCollection> colls);

// Reorders `colls` to FlowSet order; flows without a record get an empty collection.
std::vector<SeedCollection> align_seeds(const FlowSet& flows, std::span<const SeedCollection> colls);

// "base" is either a topology object or a path resolved against `base_dir`.
Proposal parse_proposal(std::string_view text, const std::string& source = "proposal",
                        const std::filesystem::path& base_dir = {});
Proposal read_proposal(const std::filesystem::path& path);
std::string proposal_to_json(const Proposal& proposal);  // base written inline

// Leading "# key=value" lines in CSV output; readers skip lines starting with '#'.
using Provenance = std::vector<std::pair<std::string, std::string>>;

struct ResultRow {
  FlowId flow_id = 0;
  std::string method;
  std::uint64_t n = 0;
  double mean = 0.0;
  double one_run_var = 0.0;
  double cv = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool operator==(const ResultRow&) const = default;
};
ResultRow to_row(const EstimateSummary& s);
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows, const Provenance& prov = {});
std::vector<ResultRow> read_results_csv(std::istream& in, const std::string& source = "results");

struct RankingRow {
  std::size_t rank = 0;
  LinkId link_id = 0;
  std::string metric;
  double score = 0.0;
  bool operator==(const RankingRow&) const = default;
};
std::vector<RankingRow> to_rows(const LinkRanking& ranking);
void write_ranking_csv(std::ostream& out, std::span<const RankingRow> rows, const Provenance& prov = {});
std::vector<RankingRow> read_ranking_csv(std::istream& in, const std::string& source = "ranking");

// proposal,flow_id,target,availability,lower,upper,n,status,feasible
void write_feasibility_csv(std::ostream& out, std::span<const FeasibilityReport> reports,
                           const Provenance& prov = {});
// proposal,availability,ccdf: fraction of the proposal's flows with availability >= value.
void write_availability_ccdf(std::ostream& out, std::span<const FeasibilityReport> reports,
                             const Provenance& prov = {});

std::string exact_report_to_json(const ExactReport& report, const Provenance& prov = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace fave
