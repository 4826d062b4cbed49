// Batch front-end for the cubic-multigraph matching library.  Reads graphs
// from .g6 (one per line) or .cmg files, runs one task per graph, and emits
// one JSON object per graph per line.  Reports are self-contained: the
// `verify` subcommand re-checks every certificate against the graph alone,
// with no reliance on how the searches found it.
//
// Exit codes: 0 all graphs produced certificates (or definite absences),
// 1 at least one per-graph error, 2 bad usage or unreadable config files,
// 3 a solve contradicted the underlying theorem (aborts the batch).
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "quell/conjectures.hpp"
#include "quell/connectivity.hpp"
#include "quell/graph.hpp"
#include "quell/matchings.hpp"
#include "quell/solver.hpp"

using nlohmann::json;
using namespace quell;

namespace {

struct CliConfig {
  std::vector<std::string> files;
  std::string factor_file;
  std::string circuits_file;
  std::string out_file;
  std::string check_kind;
  int edge = 0;
  unsigned long long seed = 0;
  long long limit_ms = 0;
  bool trace = false;
  bool no_oracle = false;
  bool ordered = false;
  bool timing = false;
};

struct LoadedGraph {
  std::string id;  // path:index
  CubicGraph graph;
  bool ok = false;
  std::string error_code;
  std::string error_detail;
};

// Raised to abort the whole batch: a reachable instance would be a
// counterexample to the theorem the solver implements (or, far more likely,
// a bug), and either way the remaining results are not trustworthy.
struct TheoremViolationAbort {
  json record;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<LoadedGraph> load_inputs(const std::vector<std::string>& files) {
  std::vector<LoadedGraph> out;
  for (const std::string& path : files) {
    std::optional<std::string> text = read_file(path);
    if (!text) {
      LoadedGraph lg;
      lg.id = path + ":0";
      lg.error_code = error_code_name(ErrorCode::MalformedFile);
      lg.error_detail = "cannot open file";
      out.push_back(std::move(lg));
      continue;
    }
    if (ends_with(path, ".g6")) {
      std::istringstream lines(*text);
      std::string line;
      int index = 0;
      while (std::getline(lines, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
          line.pop_back();
        if (line.empty()) continue;
        LoadedGraph lg;
        lg.id = path + ":" + std::to_string(index);
        try {
          lg.graph = parse_graph6(line);
          lg.ok = true;
        } catch (const GraphError& e) {
          lg.error_code = error_code_name(e.code());
          lg.error_detail = e.what();
        }
        out.push_back(std::move(lg));
        ++index;
      }
    } else {
      LoadedGraph lg;
      lg.id = path + ":0";
      try {
        lg.graph = parse_any(*text);
        lg.ok = true;
      } catch (const GraphError& e) {
        lg.error_code = error_code_name(e.code());
        lg.error_detail = e.what();
      }
      out.push_back(std::move(lg));
    }
  }
  return out;
}

std::vector<EdgeId> parse_id_list(const std::string& text) {
  std::vector<EdgeId> ids;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    if (tok[0] == '#') {  // comment runs to end of line
      std::string rest;
      std::getline(ss, rest);
      continue;
    }
    try {
      std::size_t used = 0;
      int value = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      ids.push_back(value);
    } catch (const std::exception&) {
      throw GraphError(ErrorCode::MalformedFile, "bad edge id '" + tok + "'");
    }
  }
  return ids;
}

json matchings_json(const std::vector<PerfectMatching>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(m);
  return a;
}

json bipartition_json(const std::vector<int8_t>& side) {
  json s0 = json::array(), s1 = json::array();
  for (std::size_t v = 0; v < side.size(); ++v) (side[v] == 0 ? s0 : s1).push_back(v);
  return json::array({s0, s1});
}

// Inverse of bipartition_json; empty result signals a malformed field.
std::vector<int8_t> side_from_json(const json& bip, int n) {
  if (!bip.is_array() || bip.size() != 2) return {};
  std::vector<int8_t> side(n, -1);
  for (int s = 0; s < 2; ++s) {
    if (!bip[s].is_array()) return {};
    for (const json& jv : bip[s]) {
      if (!jv.is_number_integer()) return {};
      int v = jv.get<int>();
      if (v < 0 || v >= n || side[v] != -1) return {};
      side[v] = static_cast<int8_t>(s);
    }
  }
  for (int v = 0; v < n; ++v)
    if (side[v] == -1) return {};
  return side;
}

std::vector<EdgeId> ids_from_json(const json& a) {
  std::vector<EdgeId> ids;
  if (!a.is_array()) throw GraphError(ErrorCode::MalformedFile, "expected an id array");
  for (const json& jv : a) {
    if (!jv.is_number_integer())
      throw GraphError(ErrorCode::MalformedFile, "expected an id array");
    ids.push_back(jv.get<int>());
  }
  return ids;
}

json base_record(const LoadedGraph& lg, const std::string& task) {
  json r;
  r["graph_id"] = lg.id;
  r["n"] = lg.ok ? lg.graph.vertex_count() : 0;
  r["m"] = lg.ok ? lg.graph.edge_count() : 0;
  r["task"] = task;
  r["status"] = "ok";
  r["certificate"] = {{"matchings", json::array()},
                     {"factor", json::array()},
                     {"bipartition", json::array()}};
  r["stats"] = {{"oracle_used", false}, {"reductions", 0}, {"millis", 0}};
  return r;
}

void fill_cover(json& r, const CoverReport& cover) {
  r["certificate"]["matchings"] = matchings_json(cover.matchings);
  if (!cover.bipartition.empty())
    r["certificate"]["bipartition"] = bipartition_json(cover.bipartition);
  if (!cover.multiplicities.empty()) r["multiplicities"] = cover.multiplicities;
  if (cover.kind == CoverKind::HittingMatching) r["circuit_hits"] = cover.circuit_hits;
}

SolveOptions solve_options(const CliConfig& cfg) {
  SolveOptions opts;
  opts.use_oracle = !cfg.no_oracle;
  opts.time_budget_ms = cfg.limit_ms;
  return opts;
}

void fill_solve(json& r, const CubicGraph& g, const CliConfig& cfg,
                const std::optional<std::vector<EdgeId>>& file_factor, int index) {
  OneFactorPlus factor =
      file_factor ? *file_factor
                  : random_one_factor_plus(
                        g, cfg.seed + static_cast<unsigned long long>(index));
  SolveReport rep = find_quelling_matching(g, factor, cfg.edge, solve_options(cfg));
  r["edge"] = cfg.edge;
  r["certificate"]["matchings"] = matchings_json({rep.certificate.matching});
  r["certificate"]["factor"] = rep.certificate.factor;
  r["certificate"]["bipartition"] = bipartition_json(rep.certificate.side);
  r["stats"]["oracle_used"] = rep.oracle_used;
  r["stats"]["reductions"] = rep.stats.reductions_applied;
  if (cfg.timing) r["stats"]["millis"] = rep.stats.millis;
  if (cfg.trace) r["path"] = rep.path;
}

void fill_check(json& r, const CubicGraph& g, const CliConfig& cfg,
                const std::optional<std::vector<EdgeId>>& file_factor) {
  if (cfg.check_kind == "s4") {
    CoverReport cover = file_factor ? extend_to_s4_pair(g, *file_factor, solve_options(cfg))
                                    : find_s4_pair(g, solve_options(cfg));
    fill_cover(r, cover);
    return;
  }
  std::optional<CoverReport> cover;
  if (cfg.check_kind == "fr")
    cover = file_factor ? extend_fr_triple(g, *file_factor) : find_fr_triple(g);
  else if (cfg.check_kind == "berge")
    cover = find_berge_cover(g);
  else
    cover = file_factor ? extend_fulkerson_cover(g, *file_factor)
                        : find_fulkerson_cover(g);
  if (!cover) {
    r["status"] = "absent";  // complete exhaustion, a definite refutation
    return;
  }
  fill_cover(r, *cover);
}

void fill_hit(json& r, const CubicGraph& g, const CliConfig& cfg,
              const std::optional<std::vector<EdgeId>>& circuit_ids) {
  CircuitSet circuits;
  if (circuit_ids) {
    for (EdgeId e : *circuit_ids)
      if (e < 0 || e >= g.edge_count())
        throw GraphError(ErrorCode::BadIndex, "circuit edge id out of range");
    // Disjoint circuits are recoverable from their union: delete every other
    // edge and keep the circuit components that remain.
    std::vector<char> keep(g.edge_count(), 0);
    for (EdgeId e : *circuit_ids) keep[e] = 1;
    std::vector<EdgeId> removed;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (!keep[e]) removed.push_back(e);
    ComplementComponents cc = complement_components(g, removed);
    if (!cc.paths.empty())
      throw GraphError(ErrorCode::PreconditionViolated,
                       "listed edges do not form disjoint circuits");
    circuits = cc.circuits;
  } else {
    // Default collection: the odd circuits left by the least perfect matching.
    std::optional<PerfectMatching> least;
    for_each_perfect_matching(g, [&](const PerfectMatching& m) {
      least = m;
      return false;
    });
    if (!least)
      throw GraphError(ErrorCode::NoPerfectMatching, "graph has no perfect matching");
    for (const Circuit& c : complement_components(g, *least).circuits)
      if (c.odd()) circuits.push_back(c);
  }
  CoverReport cover = find_hitting_matching(g, circuits, solve_options(cfg));
  json cj = json::array();
  for (const Circuit& c : circuits) cj.push_back(c.edges);
  r["circuits"] = cj;
  fill_cover(r, cover);
}

void fill_stats(json& r, const CubicGraph& g, const CliConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  json& s = r["stats"];
  bool simple = !g.has_loop();
  std::map<std::pair<VertexId, VertexId>, int> pair_count;
  for (const Edge& e : g.edges())
    if (++pair_count[{std::min(e.u, e.v), std::max(e.u, e.v)}] > 1) simple = false;
  s["simple"] = simple;
  s["connected"] = is_connected(g);
  s["bridges"] = static_cast<int>(find_bridges(g).size());
  auto guarded = [](const std::function<json()>& fn) -> json {
    try {
      return fn();
    } catch (const GraphError&) {
      return nullptr;
    }
  };
  s["cyclic_edge_connectivity"] = guarded([&] { return cyclic_edge_connectivity(g).value; });
  s["perfect_matchings"] = guarded([&] { return count_perfect_matchings(g); });
  s["oddness"] = guarded([&] { return oddness(g); });
  s["three_edge_colourable"] = guarded([&] { return three_edge_colouring(g).has_value(); });
  if (cfg.timing)
    s["millis"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
}

json run_task(const LoadedGraph& lg, const std::string& task, const CliConfig& cfg,
              const std::optional<std::vector<EdgeId>>& file_factor,
              const std::optional<std::vector<EdgeId>>& circuit_ids, int index) {
  json r = base_record(lg, task);
  if (!lg.ok) {
    r["status"] = lg.error_code;
    r["error"] = lg.error_detail;
    return r;
  }
  auto start = std::chrono::steady_clock::now();
  try {
    if (task == "solve")
      fill_solve(r, lg.graph, cfg, file_factor, index);
    else if (task == "hit")
      fill_hit(r, lg.graph, cfg, circuit_ids);
    else if (task == "stats")
      fill_stats(r, lg.graph, cfg);
    else
      fill_check(r, lg.graph, cfg, file_factor);
  } catch (const GraphError& e) {
    r["status"] = error_code_name(e.code());
    r["error"] = e.what();
    if (e.code() == ErrorCode::TheoremViolation) throw TheoremViolationAbort{r};
  }
  if (cfg.timing && task != "solve" && task != "stats")
    r["stats"]["millis"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
  return r;
}

// ---- verify ---------------------------------------------------------------

const LoadedGraph* lookup_graph(const std::string& graph_id,
                                std::map<std::string, std::vector<LoadedGraph>>& cache) {
  std::size_t pos = graph_id.rfind(':');
  if (pos == std::string::npos) return nullptr;
  std::string path = graph_id.substr(0, pos);
  auto it = cache.find(path);
  if (it == cache.end()) it = cache.emplace(path, load_inputs({path})).first;
  for (const LoadedGraph& lg : it->second)
    if (lg.id == graph_id && lg.ok) return &lg;
  return nullptr;
}

bool verify_solve(const CubicGraph& g, const json& rec) {
  const json& cert = rec.at("certificate");
  if (!cert.at("matchings").is_array() || cert.at("matchings").size() != 1) return false;
  QuellingCertificate qc;
  qc.matching = ids_from_json(cert.at("matchings")[0]);
  qc.factor = ids_from_json(cert.at("factor"));
  qc.side = side_from_json(cert.at("bipartition"), g.vertex_count());
  if (qc.side.empty()) return false;
  for (EdgeId e : qc.factor)
    if (e < 0 || e >= g.edge_count()) return false;
  if (!is_one_factor_plus(g, qc.factor)) return false;
  if (rec.contains("edge")) {
    EdgeId anchor = rec.at("edge").get<int>();
    if (std::find(qc.matching.begin(), qc.matching.end(), anchor) == qc.matching.end())
      return false;
  }
  return check_quelling_certificate(g, qc);
}

bool verify_cover(const CubicGraph& g, const json& rec, const std::string& task) {
  const json& cert = rec.at("certificate");
  CoverReport cover;
  for (const json& jm : cert.at("matchings")) cover.matchings.push_back(ids_from_json(jm));
  if (task == "s4") {
    cover.kind = CoverKind::S4Pair;
    cover.bipartition = side_from_json(cert.at("bipartition"), g.vertex_count());
    if (cover.bipartition.empty()) return false;
    return check_cover_report(g, cover);
  }
  if (task == "fr") {
    cover.kind = CoverKind::FRTriple;
    return check_cover_report(g, cover);
  }
  if (task == "berge" || task == "fulkerson") {
    cover.kind = task == "berge" ? CoverKind::BergeCover : CoverKind::FulkersonCover;
    if (!rec.contains("multiplicities")) return false;
    for (const json& jc : rec.at("multiplicities")) {
      if (!jc.is_number_integer()) return false;
      cover.multiplicities.push_back(jc.get<int>());
    }
    return check_cover_report(g, cover);
  }
  if (task == "hit") {
    cover.kind = CoverKind::HittingMatching;
    if (!rec.contains("circuits") || !rec.contains("circuit_hits")) return false;
    CircuitSet circuits;
    for (const json& jc : rec.at("circuits")) {
      Circuit c;
      c.edges = ids_from_json(jc);
      circuits.push_back(std::move(c));
    }
    cover.circuit_hits = ids_from_json(rec.at("circuit_hits"));
    return check_cover_report(g, cover, &circuits);
  }
  return false;
}

json verify_record(const json& rec,
                   std::map<std::string, std::vector<LoadedGraph>>& cache) {
  json v;
  v["graph_id"] = rec.value("graph_id", "");
  v["task"] = rec.value("task", "");
  std::string status = rec.value("status", "");
  std::string task = rec.value("task", "");
  if (status != "ok" || task == "stats") {
    v["status"] = "skipped";
    v["reason"] = status == "absent" ? "absence claims carry no certificate"
                                     : "record carries no certificate";
    return v;
  }
  const LoadedGraph* lg = lookup_graph(rec.value("graph_id", ""), cache);
  if (!lg) {
    v["status"] = "invalid";
    v["reason"] = "graph not reachable from graph_id";
    return v;
  }
  bool good = false;
  try {
    if (task == "solve")
      good = verify_solve(lg->graph, rec);
    else
      good = verify_cover(lg->graph, rec, task);
  } catch (const std::exception&) {
    good = false;
  }
  v["status"] = good ? "verified" : "invalid";
  return v;
}

int run_verify(const CliConfig& cfg, std::ostream& out) {
  int exit_code = 0;
  std::map<std::string, std::vector<LoadedGraph>> cache;
  for (const std::string& path : cfg.files) {
    std::optional<std::string> text = read_file(path);
    if (!text) {
      json v{{"report", path}, {"status", "invalid"}, {"reason", "cannot open report"}};
      out << v.dump() << "\n";
      exit_code = 1;
      continue;
    }
    std::istringstream lines(*text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json rec = json::parse(line, nullptr, false);
      if (rec.is_discarded()) {
        json v{{"report", path}, {"status", "invalid"}, {"reason", "malformed JSON line"}};
        out << v.dump() << "\n";
        exit_code = 1;
        continue;
      }
      json v = verify_record(rec, cache);
      if (v["status"] == "invalid") exit_code = 1;
      out << v.dump() << "\n";
    }
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic multigraph matchings: quelling solves, cover searches, reports"};
  app.require_subcommand(1);
  CliConfig cfg;

  CLI::App* solve = app.add_subcommand(
      "solve", "find a perfect matching through an edge quelling a 1+-factor");
  CLI::App* check =
      app.add_subcommand("check", "search for matching covers (s4, fr, berge, fulkerson)");
  CLI::App* hit =
      app.add_subcommand("hit", "find a perfect matching hitting disjoint odd circuits");
  CLI::App* stats = app.add_subcommand("stats", "per-graph structural summary");
  CLI::App* verify =
      app.add_subcommand("verify", "re-check certificates from report files");

  check->add_option("kind", cfg.check_kind, "one of s4 | fr | berge | fulkerson")
      ->required()
      ->check(CLI::IsMember({"s4", "fr", "berge", "fulkerson"}));

  for (CLI::App* sc : {solve, check, hit, stats, verify}) {
    sc->add_option("files", cfg.files,
                   sc == verify ? "report files (one JSON object per line)"
                                : "graph files (.g6: one graph per line; others: one "
                                  "whole-file graph, auto-detected)")
        ->required()
        ->expected(-1);
    sc->add_option("--out", cfg.out_file, "write the report stream to FILE instead of stdout");
    sc->add_flag("--ordered", cfg.ordered,
                 "emit results in input order (always the case: the batch runs "
                 "sequentially; accepted for interface stability)");
    sc->add_flag("--timing", cfg.timing,
                 "include real milliseconds in stats; off keeps reports "
                 "byte-reproducible across runs");
  }
  for (CLI::App* sc : {solve, check, hit}) {
    sc->add_flag("--no-oracle", cfg.no_oracle,
                 "forbid the enumeration fallback inside the quelling solver");
    sc->add_option("--limit-ms", cfg.limit_ms,
                   "cooperative time budget per graph for the quelling solver");
  }
  for (CLI::App* sc : {solve, check})
    sc->add_option("--factor", cfg.factor_file,
                   sc == solve ? "file of edge ids to use as the 1+-factor"
                               : "file of edge ids: a perfect matching the cover must extend");
  solve->add_option("--edge", cfg.edge, "anchor edge id the matching must contain")
      ->capture_default_str();
  solve->add_option("--seed", cfg.seed,
                    "base seed when no --factor is given; graph i uses seed+i")
      ->capture_default_str();
  solve->add_flag("--trace", cfg.trace,
                  "record the reduction chain behind the accepted matching");
  hit->add_option("--circuits", cfg.circuits_file,
                  "file of edge ids forming the disjoint circuits to hit "
                  "(default: odd circuits left by the least perfect matching)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string task;
  if (solve->parsed()) task = "solve";
  else if (check->parsed()) task = cfg.check_kind;
  else if (hit->parsed()) task = "hit";
  else if (stats->parsed()) task = "stats";
  else task = "verify";

  if (task == "berge" && !cfg.factor_file.empty()) {
    std::cerr << "berge covers have no seeded variant; drop --factor\n";
    return 2;
  }

  std::ofstream out_file;
  if (!cfg.out_file.empty()) {
    out_file.open(cfg.out_file);
    if (!out_file) {
      std::cerr << "cannot open --out file " << cfg.out_file << "\n";
      return 2;
    }
  }
  std::ostream& out = cfg.out_file.empty() ? std::cout : out_file;

  if (task == "verify") return run_verify(cfg, out);

  std::optional<std::vector<EdgeId>> file_factor;
  if (!cfg.factor_file.empty()) {
    std::optional<std::string> text = read_file(cfg.factor_file);
    if (!text) {
      std::cerr << "cannot open --factor file " << cfg.factor_file << "\n";
      return 2;
    }
    try {
      file_factor = parse_id_list(*text);
    } catch (const GraphError& e) {
      std::cerr << "--factor file: " << e.what() << "\n";
      return 2;
    }
  }
  std::optional<std::vector<EdgeId>> circuit_ids;
  if (!cfg.circuits_file.empty()) {
    std::optional<std::string> text = read_file(cfg.circuits_file);
    if (!text) {
      std::cerr << "cannot open --circuits file " << cfg.circuits_file << "\n";
      return 2;
    }
    try {
      circuit_ids = parse_id_list(*text);
    } catch (const GraphError& e) {
      std::cerr << "--circuits file: " << e.what() << "\n";
      return 2;
    }
  }

  std::vector<LoadedGraph> graphs = load_inputs(cfg.files);
  int exit_code = 0;
  try {
    int index = 0;
    for (const LoadedGraph& lg : graphs) {
      json r = run_task(lg, task, cfg, file_factor, circuit_ids, index);
      std::string status = r["status"].get<std::string>();
      if (status != "ok" && status != "absent") exit_code = 1;
      out << r.dump() << "\n";
      ++index;
    }
  } catch (const TheoremViolationAbort& tv) {
    out << tv.record.dump() << "\n";
    out.flush();
    return 3;
  }
  return exit_code;
}
