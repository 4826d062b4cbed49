#include "quell/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <utility>

namespace quell {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotCubic: return "NotCubic";
    case ErrorCode::LoopForbidden: return "LoopForbidden";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::MalformedGraph6: return "MalformedGraph6";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::HasBridge: return "HasBridge";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NoPerfectMatching: return "NoPerfectMatching";
    case ErrorCode::NotOneFactorPlus: return "NotOneFactorPlus";
    case ErrorCode::LoopEdge: return "LoopEdge";
    case ErrorCode::NotA2Cut: return "NotA2Cut";
    case ErrorCode::FactorCaseViolated: return "FactorCaseViolated";
    case ErrorCode::InconsistentCutParity: return "InconsistentCutParity";
    case ErrorCode::NotACyclic3Cut: return "NotACyclic3Cut";
    case ErrorCode::EvenIntersection: return "EvenIntersection";
    case ErrorCode::PendantIndexMismatch: return "PendantIndexMismatch";
    case ErrorCode::DegenerateNeighbourhood: return "DegenerateNeighbourhood";
    case ErrorCode::NotPerfectInChild: return "NotPerfectInChild";
    case ErrorCode::ConflictingLift: return "ConflictingLift";
    case ErrorCode::ConfigurationMismatch: return "ConfigurationMismatch";
    case ErrorCode::ChildHasBridge: return "ChildHasBridge";
    case ErrorCode::CircuitsNotDisjoint: return "CircuitsNotDisjoint";
    case ErrorCode::EvenCircuitListed: return "EvenCircuitListed";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::TheoremViolation: return "TheoremViolation";
  }
  return "UnknownError";
}

CubicGraph::CubicGraph(int vertex_count, std::vector<Edge> edges, bool allow_loops)
    : n_(vertex_count), allow_loops_(allow_loops), edges_(std::move(edges)) {
  if (n_ < 0) throw GraphError(ErrorCode::BadIndex, "negative vertex count");
  incident_.resize(n_);
  for (EdgeId e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= n_ || ed.v < 0 || ed.v >= n_)
      throw GraphError(ErrorCode::BadIndex,
                       "edge " + std::to_string(e) + " endpoint out of range");
    if (ed.u == ed.v) {
      if (!allow_loops_)
        throw GraphError(ErrorCode::LoopForbidden, "loop at vertex " + std::to_string(ed.u));
      incident_[ed.u].push_back(e);
      incident_[ed.u].push_back(e);  // a loop counts twice towards the degree
    } else {
      incident_[ed.u].push_back(e);
      incident_[ed.v].push_back(e);
    }
  }
  for (VertexId v = 0; v < n_; ++v) {
    if (incident_[v].size() != 3)
      throw GraphError(ErrorCode::NotCubic, "vertex " + std::to_string(v) + " has degree " +
                                                std::to_string(incident_[v].size()));
  }
}

bool CubicGraph::has_loop() const {
  for (const Edge& e : edges_)
    if (e.u == e.v) return true;
  return false;
}

bool CubicGraph::is_simple() const {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(edges_.size());
  for (const Edge& e : edges_) {
    if (e.u == e.v) return false;
    pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(pairs.begin(), pairs.end());
  return std::adjacent_find(pairs.begin(), pairs.end()) == pairs.end();
}

VertexId CubicGraph::other_end(EdgeId e, VertexId from) const {
  const Edge& ed = edges_.at(e);
  if (ed.u == from) return ed.v;
  if (ed.v == from) return ed.u;
  throw GraphError(ErrorCode::BadIndex, "vertex " + std::to_string(from) +
                                            " not an endpoint of edge " + std::to_string(e));
}

bool CubicGraph::edges_adjacent(EdgeId e, EdgeId f) const {
  const Edge& a = edges_.at(e);
  const Edge& b = edges_.at(f);
  return a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v;
}

// ---- graph6 --------------------------------------------------------------

namespace {

constexpr int kG6Offset = 63;

void append_bits(std::string& out, uint64_t value, int bits) {
  for (int i = bits - 6; i >= 0; i -= 6)
    out.push_back(static_cast<char>(((value >> i) & 0x3f) + kG6Offset));
}

}  // namespace

CubicGraph parse_graph6(const std::string& line) {
  size_t pos = 0;
  auto next = [&]() -> int {
    if (pos >= line.size())
      throw GraphError(ErrorCode::MalformedGraph6, "unexpected end of line");
    int c = static_cast<unsigned char>(line[pos++]);
    if (c < kG6Offset || c > 126)
      throw GraphError(ErrorCode::MalformedGraph6,
                       "byte out of range at position " + std::to_string(pos - 1));
    return c - kG6Offset;
  };

  long long n;
  int first = next();
  if (first < 63) {
    n = first;
  } else {
    // '~' prefix: 18-bit count in the next three bytes ('~~' + 36 bits is
    // beyond anything this library works with).
    int a = next();
    if (a == 63)
      throw GraphError(ErrorCode::MalformedGraph6, "graph too large");
    n = (static_cast<long long>(a) << 12) | (next() << 6) | next();
  }

  std::vector<Edge> edges;
  int bit = 0, cur = 0;
  for (VertexId j = 1; j < n; ++j) {
    for (VertexId i = 0; i < j; ++i) {
      if (bit == 0) {
        cur = next();
        bit = 6;
      }
      --bit;
      if ((cur >> bit) & 1) edges.push_back({i, j});
    }
  }
  while (pos < line.size()) {
    if (!std::isspace(static_cast<unsigned char>(line[pos])))
      throw GraphError(ErrorCode::MalformedGraph6, "trailing bytes");
    ++pos;
  }
  // Bit order above is column-major; edge ids are assigned in lexicographic
  // endpoint order instead, so the id layout does not depend on the encoding.
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return CubicGraph(static_cast<int>(n), std::move(edges), /*allow_loops=*/false);
}

std::string to_graph6(const CubicGraph& g) {
  if (!g.is_simple())
    throw GraphError(ErrorCode::NotSimple, "graph6 cannot encode parallel edges or loops");
  const int n = g.vertex_count();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + kG6Offset));
  } else {
    out.push_back('~');
    append_bits(out, static_cast<uint64_t>(n), 18);
  }
  std::vector<char> adj(static_cast<size_t>(n) * n, 0);
  for (const Edge& e : g.edges()) adj[static_cast<size_t>(e.u) * n + e.v] = adj[static_cast<size_t>(e.v) * n + e.u] = 1;
  int bit = 5, cur = 0;
  for (VertexId j = 1; j < n; ++j) {
    for (VertexId i = 0; i < j; ++i) {
      if (adj[static_cast<size_t>(i) * n + j]) cur |= 1 << bit;
      if (bit-- == 0) {
        out.push_back(static_cast<char>(cur + kG6Offset));
        bit = 5;
        cur = 0;
      }
    }
  }
  if (bit != 5) out.push_back(static_cast<char>(cur + kG6Offset));
  return out;
}

// ---- .cmg ----------------------------------------------------------------

CubicGraph parse_multigraph(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::vector<std::string> lines;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    size_t i = raw.find_first_not_of(" \t");
    if (i == std::string::npos || raw[i] == '#') continue;
    lines.push_back(raw);
  }
  if (lines.empty()) throw GraphError(ErrorCode::MalformedFile, "no header line");

  std::istringstream head(lines[0]);
  int n = 0, m = 0;
  if (!(head >> n >> m)) throw GraphError(ErrorCode::MalformedFile, "bad header: " + lines[0]);
  bool allow_loops = false;
  std::string word;
  if (head >> word) {
    if (word != "loops")
      throw GraphError(ErrorCode::MalformedFile, "unexpected header token: " + word);
    allow_loops = true;
  }
  if (m < 0 || static_cast<int>(lines.size()) != m + 1)
    throw GraphError(ErrorCode::MalformedFile,
                     "expected " + std::to_string(m) + " edge lines, found " +
                         std::to_string(lines.size() - 1));

  std::vector<Edge> edges;
  edges.reserve(m);
  for (int k = 1; k <= m; ++k) {
    std::istringstream es(lines[k]);
    Edge e;
    std::string extra;
    if (!(es >> e.u >> e.v) || (es >> extra))
      throw GraphError(ErrorCode::MalformedFile, "bad edge line: " + lines[k]);
    edges.push_back(e);
  }
  return CubicGraph(n, std::move(edges), allow_loops);
}

std::string to_cmg(const CubicGraph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count();
  if (g.allows_loops()) out << " loops";
  out << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

CubicGraph parse_any(const std::string& text) {
  for (size_t i = 0; i < text.size();) {
    size_t eol = text.find('\n', i);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(i, eol - i);
    i = eol + 1;
    size_t j = line.find_first_not_of(" \t\r");
    if (j == std::string::npos || line[j] == '#') continue;
    if (std::isdigit(static_cast<unsigned char>(line[j]))) return parse_multigraph(text);
    return parse_graph6(line.substr(j));
  }
  throw GraphError(ErrorCode::MalformedFile, "empty input");
}

// ---- subgraph views ------------------------------------------------------

SubgraphView::SubgraphView(const CubicGraph& g, const std::vector<EdgeId>& kept_edges)
    : g_(&g), kept_(g.edge_count(), 0), degree_(g.vertex_count(), 0) {
  for (EdgeId e : kept_edges) {
    if (e < 0 || e >= g.edge_count())
      throw GraphError(ErrorCode::BadIndex, "edge id " + std::to_string(e) + " out of range");
    if (kept_[e]) continue;
    kept_[e] = 1;
    degree_[g.edge(e).u] += g.is_loop(e) ? 2 : 1;
    if (!g.is_loop(e)) degree_[g.edge(e).v] += 1;
  }
}

std::vector<EdgeId> SubgraphView::kept_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < static_cast<int>(kept_.size()); ++e)
    if (kept_[e]) out.push_back(e);
  return out;
}

SubgraphView complement_view(const CubicGraph& g, const std::vector<EdgeId>& removed) {
  std::vector<char> gone(g.edge_count(), 0);
  for (EdgeId e : removed) gone.at(e) = 1;
  std::vector<EdgeId> kept;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!gone[e]) kept.push_back(e);
  return SubgraphView(g, kept);
}

// ---- helpers -------------------------------------------------------------

int edge_distance(const CubicGraph& g, EdgeId e, EdgeId f) {
  if (e < 0 || e >= g.edge_count() || f < 0 || f >= g.edge_count())
    throw GraphError(ErrorCode::BadIndex, "edge id out of range");
  if (e == f) return 0;
  std::vector<int> dist(g.edge_count(), -1);
  dist[e] = 0;
  std::deque<EdgeId> queue{e};
  while (!queue.empty()) {
    EdgeId cur = queue.front();
    queue.pop_front();
    for (VertexId end : {g.edge(cur).u, g.edge(cur).v}) {
      for (EdgeId next : g.incident(end)) {
        if (dist[next] != -1) continue;
        dist[next] = dist[cur] + 1;
        if (next == f) return dist[next];
        queue.push_back(next);
      }
    }
  }
  return -1;
}

std::vector<EdgeId> sorted_unique(std::vector<EdgeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool contains(const std::vector<EdgeId>& sorted_ids, EdgeId e) {
  return std::binary_search(sorted_ids.begin(), sorted_ids.end(), e);
}

std::vector<EdgeId> set_union(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
  std::vector<EdgeId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<EdgeId> set_minus(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
  std::vector<EdgeId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<EdgeId> set_intersect(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
  std::vector<EdgeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace quell
