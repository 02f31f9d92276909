#include "fave/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "fave/errors.h"

namespace fave {
namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(source + ": " + line_col(text, at), msg);
  }
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(source_ + ": " + (path.empty() ? std::string("<root>") : path), what);
  }

  const json& member(const json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "missing required field");
    return *it;
  }
  const json* optional_member(const json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }
  const json& array(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }
  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }
  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }
  std::uint64_t uint(const json& v, const std::string& path) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail(path, "expected a non-negative integer");
  }
  std::uint32_t id(const json& v, const std::string& path) const {
    const auto x = uint(v, path);
    if (x == 0 || x > 0xffffffffull) fail(path, "expected a positive 32-bit id");
    return static_cast<std::uint32_t>(x);
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }
  static std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
  }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

Capacity read_capacity(const Reader& rd, const json& v, const std::string& path) {
  if (v.is_null()) return Capacity::infinite();
  const double c = rd.number(v, path);
  if (!(c >= 0.0) || std::isinf(c)) rd.fail(path, "capacity must be finite and >= 0, or null for infinite");
  return Capacity(c);
}

Topology topology_from(const Reader& rd, const json& doc, const std::string& root) {
  std::vector<std::string> nodes;
  const std::string np = Reader::join(root, "nodes");
  const auto& jn = rd.array(rd.member(doc, root, "nodes"), np);
  for (std::size_t i = 0; i < jn.size(); ++i) nodes.push_back(rd.string(jn[i], Reader::index(np, i)));

  std::vector<LinkSpec> specs;
  const std::string lp = Reader::join(root, "links");
  const auto& jl = rd.array(rd.member(doc, root, "links"), lp);
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string at = Reader::index(lp, i);
    LinkSpec s;
    s.id = rd.id(rd.member(jl[i], at, "id"), Reader::join(at, "id"));
    s.src = rd.string(rd.member(jl[i], at, "src"), Reader::join(at, "src"));
    s.dst = rd.string(rd.member(jl[i], at, "dst"), Reader::join(at, "dst"));
    s.p = rd.number(rd.member(jl[i], at, "p"), Reader::join(at, "p"));
    if (!(s.p >= 0.0 && s.p <= 1.0)) rd.fail(Reader::join(at, "p"), "failure probability outside [0,1]");
    s.capacity = read_capacity(rd, rd.member(jl[i], at, "c"), Reader::join(at, "c"));
    specs.push_back(std::move(s));
  }
  try {
    return Topology(std::move(nodes), std::move(specs));
  } catch (const InvalidArgument& e) {
    rd.fail(root, e.what());
  }
}

ordered topology_json(const Topology& topo) {
  ordered doc;
  doc["nodes"] = topo.nodes();
  ordered links = ordered::array();
  for (const auto& s : topo.link_specs()) {
    ordered l;
    l["id"] = s.id;
    l["src"] = s.src;
    l["dst"] = s.dst;
    l["p"] = s.p;
    if (s.capacity.is_infinite()) {
      l["c"] = nullptr;
    } else {
      l["c"] = s.capacity.value();
    }
    links.push_back(std::move(l));
  }
  doc["links"] = std::move(links);
  return doc;
}

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_provenance(std::ostream& out, const Provenance& prov) {
  for (const auto& [k, v] : prov) out << "# " << k << "=" << v << "\n";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

// Yields data rows after validating the header; `where` receives "line N".
template <typename F>
void for_each_row(std::istream& in, const std::string& source, std::string_view header, F&& f) {
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = source + ": line " + std::to_string(lineno);
    if (!seen_header) {
      if (line != header) throw ParseError(where, "expected header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    f(split_csv(line), where);
  }
  if (!seen_header) throw ParseError(source, "missing header");
}

double cell_double(const std::string& s, const std::string& where, const char* col) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    throw ParseError(where + ", column " + col, "expected a number, got '" + s + "'");
  }
  return v;
}

std::uint64_t cell_uint(const std::string& s, const std::string& where, const char* col) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError(where + ", column " + col, "expected a non-negative integer, got '" + s + "'");
  return v;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Topology parse_topology(std::string_view text, const std::string& source) {
  Reader rd(source);
  return topology_from(rd, parse_json(text, source), "");
}

Topology read_topology(const std::filesystem::path& path) {
  return parse_topology(read_text_file(path), path.string());
}

std::string topology_to_json(const Topology& topo) { return topology_json(topo).dump(2) + "\n"; }

FlowSet parse_flows(std::string_view text, const std::string& source) {
  Reader rd(source);
  const json doc = parse_json(text, source);
  const auto& jf = rd.array(rd.member(doc, "", "flows"), "flows");
  std::vector<Flow> flows;
  for (std::size_t i = 0; i < jf.size(); ++i) {
    const std::string at = Reader::index("flows", i);
    Flow f;
    f.id = rd.id(rd.member(jf[i], at, "id"), Reader::join(at, "id"));
    f.src = rd.string(rd.member(jf[i], at, "src"), Reader::join(at, "src"));
    f.dst = rd.string(rd.member(jf[i], at, "dst"), Reader::join(at, "dst"));
    f.demand = rd.number(rd.member(jf[i], at, "demand"), Reader::join(at, "demand"));
    if (const json* t = rd.optional_member(jf[i], at, "target")) f.target = rd.number(*t, Reader::join(at, "target"));
    flows.push_back(std::move(f));
  }
  try {
    return FlowSet(std::move(flows));
  } catch (const InvalidArgument& e) {
    rd.fail("flows", e.what());
  }
}

FlowSet read_flows(const std::filesystem::path& path) { return parse_flows(read_text_file(path), path.string()); }

std::string flows_to_json(const FlowSet& flows) {
  ordered arr = ordered::array();
  for (const auto& f : flows) {
    ordered o;
    o["id"] = f.id;
    o["src"] = f.src;
    o["dst"] = f.dst;
    o["demand"] = f.demand;
    o["target"] = f.target;
    arr.push_back(std::move(o));
  }
  ordered doc;
  doc["flows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::vector<SeedCollection> parse_seeds(std::string_view text, const std::string& source) {
  Reader rd(source);
  const json doc = parse_json(text, source);
  auto one = [&](const json& rec, const std::string& at) {
    const FlowId fid = rd.id(rd.member(rec, at, "flow_id"), Reader::join(at, "flow_id"));
    const std::string sp = Reader::join(at, "seeds");
    const auto& js = rd.array(rd.member(rec, at, "seeds"), sp);
    std::vector<LinkSet> sets;
    for (std::size_t i = 0; i < js.size(); ++i) {
      const std::string ip = Reader::index(sp, i);
      std::vector<LinkId> ids;
      const auto& members = rd.array(js[i], ip);
      for (std::size_t j = 0; j < members.size(); ++j) ids.push_back(rd.id(members[j], Reader::index(ip, j)));
      sets.emplace_back(std::move(ids));
    }
    return SeedCollection(std::move(sets), fid);
  };
  std::vector<SeedCollection> out;
  if (doc.is_object()) {
    out.push_back(one(doc, ""));
  } else {
    const auto& arr = rd.array(doc, "");
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(one(arr[i], Reader::index("", i)));
  }
  return out;
}

std::vector<SeedCollection> read_seeds(const std::filesystem::path& path) {
  return parse_seeds(read_text_file(path), path.string());
}

std::string seeds_to_json(std::span<const SeedCollection> colls) {
  ordered arr = ordered::array();
  for (const auto& c : colls) {
    ordered rec;
    rec["flow_id"] = c.flow_id();
    ordered sets = ordered::array();
    for (const auto& s : c) sets.push_back(std::vector<LinkId>(s.begin(), s.end()));
    rec["seeds"] = std::move(sets);
    arr.push_back(std::move(rec));
  }
  return arr.dump() + "\n";
}

std::vector<SeedCollection> align_seeds(const FlowSet& flows, std::span<const SeedCollection> colls) {
  std::vector<SeedCollection> out(flows.size());
  for (std::size_t k = 0; k < flows.size(); ++k) out[k].set_flow_id(flows[k].id);
  for (const auto& c : colls) {
    const std::size_t k = flows.index_of(c.flow_id());
    out[k] = c;
  }
  return out;
}

Proposal parse_proposal(std::string_view text, const std::string& source, const std::filesystem::path& base_dir) {
  Reader rd(source);
  const json doc = parse_json(text, source);
  Proposal prop;
  if (const json* l = rd.optional_member(doc, "", "label")) prop.label = rd.string(*l, "label");
  const json& base = rd.member(doc, "", "base");
  if (base.is_string()) {
    std::filesystem::path p = base.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    prop.base = read_topology(p);
  } else {
    prop.base = topology_from(rd, base, "base");
  }
  const auto& added = rd.array(rd.member(doc, "", "added_links"), "added_links");
  for (std::size_t i = 0; i < added.size(); ++i) {
    const std::string at = Reader::index("added_links", i);
    ProposedLink pl;
    pl.src = rd.string(rd.member(added[i], at, "src"), Reader::join(at, "src"));
    pl.dst = rd.string(rd.member(added[i], at, "dst"), Reader::join(at, "dst"));
    if (!prop.base.find_node(pl.src)) rd.fail(Reader::join(at, "src"), "unknown node '" + pl.src + "'");
    if (!prop.base.find_node(pl.dst)) rd.fail(Reader::join(at, "dst"), "unknown node '" + pl.dst + "'");
    if (const json* p = rd.optional_member(added[i], at, "p")) {
      pl.p = rd.number(*p, Reader::join(at, "p"));
      if (!(pl.p >= 0.0 && pl.p <= 1.0)) rd.fail(Reader::join(at, "p"), "failure probability outside [0,1]");
    }
    if (const json* c = rd.optional_member(added[i], at, "c")) pl.capacity = read_capacity(rd, *c, Reader::join(at, "c"));
    prop.added_links.push_back(std::move(pl));
  }
  return prop;
}

Proposal read_proposal(const std::filesystem::path& path) {
  return parse_proposal(read_text_file(path), path.string(), path.parent_path());
}

std::string proposal_to_json(const Proposal& proposal) {
  ordered doc;
  doc["label"] = proposal.label;
  doc["base"] = topology_json(proposal.base);
  ordered added = ordered::array();
  for (const auto& a : proposal.added_links) {
    ordered l;
    l["src"] = a.src;
    l["dst"] = a.dst;
    l["p"] = a.p;
    if (a.capacity.is_infinite()) {
      l["c"] = nullptr;
    } else {
      l["c"] = a.capacity.value();
    }
    added.push_back(std::move(l));
  }
  doc["added_links"] = std::move(added);
  return doc.dump(2) + "\n";
}

ResultRow to_row(const EstimateSummary& s) {
  const auto [lo, hi] = s.ci();
  return ResultRow{s.flow_id, s.method, s.n, s.mean, s.one_run_var(), s.cv(), lo, hi};
}

static constexpr std::string_view kResultsHeader = "flow_id,method,n,mean,one_run_var,cv,ci_lo,ci_hi";
static constexpr std::string_view kRankingHeader = "rank,link_id,metric,score";

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows, const Provenance& prov) {
  write_provenance(out, prov);
  out << kResultsHeader << "\n";
  for (const auto& r : rows) {
    out << r.flow_id << ',' << r.method << ',' << r.n << ',' << fmt(r.mean) << ',' << fmt(r.one_run_var) << ','
        << fmt(r.cv) << ',' << fmt(r.ci_lo) << ',' << fmt(r.ci_hi) << "\n";
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in, const std::string& source) {
  std::vector<ResultRow> rows;
  for_each_row(in, source, kResultsHeader, [&](const std::vector<std::string>& c, const std::string& where) {
    if (c.size() != 8) throw ParseError(where, "expected 8 columns, got " + std::to_string(c.size()));
    ResultRow r;
    r.flow_id = static_cast<FlowId>(cell_uint(c[0], where, "flow_id"));
    r.method = c[1];
    r.n = cell_uint(c[2], where, "n");
    r.mean = cell_double(c[3], where, "mean");
    r.one_run_var = cell_double(c[4], where, "one_run_var");
    r.cv = cell_double(c[5], where, "cv");
    r.ci_lo = cell_double(c[6], where, "ci_lo");
    r.ci_hi = cell_double(c[7], where, "ci_hi");
    rows.push_back(std::move(r));
  });
  return rows;
}

std::vector<RankingRow> to_rows(const LinkRanking& ranking) {
  std::vector<RankingRow> rows;
  for (std::size_t i = 0; i < ranking.entries.size(); ++i)
    rows.push_back({i + 1, ranking.entries[i].link, std::string(to_string(ranking.metric)), ranking.entries[i].score});
  return rows;
}

void write_ranking_csv(std::ostream& out, std::span<const RankingRow> rows, const Provenance& prov) {
  write_provenance(out, prov);
  out << kRankingHeader << "\n";
  for (const auto& r : rows) out << r.rank << ',' << r.link_id << ',' << r.metric << ',' << fmt(r.score) << "\n";
}

std::vector<RankingRow> read_ranking_csv(std::istream& in, const std::string& source) {
  std::vector<RankingRow> rows;
  for_each_row(in, source, kRankingHeader, [&](const std::vector<std::string>& c, const std::string& where) {
    if (c.size() != 4) throw ParseError(where, "expected 4 columns, got " + std::to_string(c.size()));
    RankingRow r;
    r.rank = cell_uint(c[0], where, "rank");
    r.link_id = static_cast<LinkId>(cell_uint(c[1], where, "link_id"));
    r.metric = c[2];
    r.score = cell_double(c[3], where, "score");
    rows.push_back(std::move(r));
  });
  return rows;
}

void write_feasibility_csv(std::ostream& out, std::span<const FeasibilityReport> reports, const Provenance& prov) {
  write_provenance(out, prov);
  out << "proposal,flow_id,target,availability,lower,upper,n,status,feasible\n";
  for (const auto& rep : reports) {
    for (const auto& f : rep.flows) {
      out << rep.label << ',' << f.flow_id << ',' << fmt(f.target) << ',' << fmt(f.availability) << ','
          << fmt(f.lower) << ',' << fmt(f.upper) << ',' << f.samples << ',' << to_string(f.status) << ','
          << (rep.feasible ? 1 : 0) << "\n";
    }
  }
}

void write_availability_ccdf(std::ostream& out, std::span<const FeasibilityReport> reports, const Provenance& prov) {
  write_provenance(out, prov);
  out << "proposal,availability,ccdf\n";
  for (const auto& rep : reports) {
    std::vector<double> a;
    for (const auto& f : rep.flows) a.push_back(f.availability);
    std::sort(a.begin(), a.end());
    const double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i > 0 && a[i] == a[i - 1]) continue;
      out << rep.label << ',' << fmt(a[i]) << ',' << fmt(static_cast<double>(a.size() - i) / n) << "\n";
    }
  }
}

std::string exact_report_to_json(const ExactReport& report, const Provenance& prov) {
  ordered doc;
  if (!prov.empty()) {
    ordered p;
    for (const auto& [k, v] : prov) p[k] = v;
    doc["provenance"] = std::move(p);
  }
  doc["mu"] = report.mu;
  ordered samplers = ordered::array();
  for (const auto& s : report.samplers) {
    ordered o;
    o["name"] = s.name;
    o["mean"] = s.mean;
    o["variance"] = s.variance;
    o["cv"] = s.cv;
    o["kl_nats"] = s.kl_nats;
    samplers.push_back(std::move(o));
  }
  doc["samplers"] = std::move(samplers);
  ordered table = ordered::array();
  for (const auto& row : report.table) {
    ordered o;
    o["config"] = row.config.to_string();
    o["p"] = row.p;
    o["failed"] = row.failed;
    o["q"] = row.q;
    table.push_back(std::move(o));
  }
  doc["table"] = std::move(table);
  return doc.dump(2) + "\n";
}

}  // namespace fave
