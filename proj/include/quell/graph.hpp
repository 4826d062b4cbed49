// Core multigraph type for cubic (3-regular) graphs, with the two exchange
// formats used by the tools: graph6 for simple graphs and a plain-text
// multigraph format (.cmg) that can carry parallel edges and loops.
//
// Vertices and edges are dense 0-based ids.  EdgeId is positional: the i-th
// edge handed to the constructor (or the i-th edge line of a file) has id i,
// and parallel edges keep distinct ids.  Nothing ever derives an edge id from
// its endpoints, so reductions can track edges across surgery by id alone.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quell {

using VertexId = int;
using EdgeId = int;

struct Edge {
  VertexId u = -1;
  VertexId v = -1;
};

enum class ErrorCode {
  // construction / parsing
  NotCubic,
  LoopForbidden,
  BadIndex,
  MalformedGraph6,
  MalformedFile,
  NotSimple,
  // structural preconditions
  Disconnected,
  HasBridge,
  PreconditionViolated,
  // matchings and factors
  NoPerfectMatching,
  NotOneFactorPlus,
  LoopEdge,
  // cut splitting
  NotA2Cut,
  FactorCaseViolated,
  InconsistentCutParity,
  NotACyclic3Cut,
  EvenIntersection,
  PendantIndexMismatch,
  // reductions at an edge
  DegenerateNeighbourhood,
  NotPerfectInChild,
  ConflictingLift,
  ConfigurationMismatch,
  ChildHasBridge,
  // circuit collections
  CircuitsNotDisjoint,
  EvenCircuitListed,
  // search control
  SearchBudgetExceeded,
  // the library could not do what the underlying theorem promises; a reachable
  // instance of this error would be a counterexample or (far more likely) a bug
  TheoremViolation,
};

const char* error_code_name(ErrorCode code);

class GraphError : public std::runtime_error {
 public:
  GraphError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class CubicGraph {
 public:
  // The empty graph (vacuously cubic); useful as a placeholder in records
  // that are filled in incrementally.
  CubicGraph() = default;

  // Validates that every vertex has degree exactly 3 (a loop contributes 2 to
  // the degree of its vertex).  Throws NotCubic / BadIndex / LoopForbidden.
  CubicGraph(int vertex_count, std::vector<Edge> edges, bool allow_loops = false);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  bool allows_loops() const { return allow_loops_; }

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool is_loop(EdgeId e) const { return edges_.at(e).u == edges_.at(e).v; }
  bool has_loop() const;
  bool is_simple() const;  // no loops, no parallel edges

  // Incident edge ids in increasing order; a loop appears twice, so the list
  // always has length 3.
  const std::vector<EdgeId>& incident(VertexId v) const { return incident_.at(v); }

  // The endpoint of e that is not `from`; for a loop returns `from` itself.
  VertexId other_end(EdgeId e, VertexId from) const;

  bool incident_to(EdgeId e, VertexId v) const {
    return edges_.at(e).u == v || edges_.at(e).v == v;
  }
  bool edges_adjacent(EdgeId e, EdgeId f) const;

 private:
  int n_ = 0;
  bool allow_loops_ = false;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
};

// ---- graph6 (simple graphs only) ----------------------------------------
//
// One graph per line, printable bytes 63..126, upper-triangle bit stream in
// column order.  Parsing sorts the decoded edges lexicographically by
// endpoint pair before assigning edge ids, so parse(serialize(G)) reproduces
// the edge list of any simple graph whose edges are in that order.

CubicGraph parse_graph6(const std::string& line);       // MalformedGraph6 / NotCubic
std::string to_graph6(const CubicGraph& g);             // NotSimple if loops or parallels

// ---- .cmg multigraph format ---------------------------------------------
//
//   # comment lines and blank lines are ignored
//   n m          (or "n m loops" to permit loops)
//   u v          (m lines; 0-based endpoints; line order fixes the EdgeId)

CubicGraph parse_multigraph(const std::string& text);   // MalformedFile / NotCubic / LoopForbidden
std::string to_cmg(const CubicGraph& g);

// Auto-detects the format: a first non-comment line starting with a digit is
// .cmg, anything else is graph6.
CubicGraph parse_any(const std::string& text);

// ---- subgraph views ------------------------------------------------------

// A subset of the edges of a fixed parent graph, on the full vertex set.
class SubgraphView {
 public:
  SubgraphView(const CubicGraph& g, const std::vector<EdgeId>& kept_edges);

  const CubicGraph& parent() const { return *g_; }
  bool keeps(EdgeId e) const { return kept_.at(e) != 0; }
  int degree(VertexId v) const { return degree_.at(v); }  // loops count 2
  std::vector<EdgeId> kept_edges() const;

 private:
  const CubicGraph* g_;
  std::vector<char> kept_;
  std::vector<int> degree_;
};

// Complement view: the edges of g that are NOT in `removed`.
SubgraphView complement_view(const CubicGraph& g, const std::vector<EdgeId>& removed);

// ---- small helpers -------------------------------------------------------

// Number of steps between two edges in the line graph (adjacent edges are at
// distance 1, e itself at 0); -1 if they are in different components.
int edge_distance(const CubicGraph& g, EdgeId e, EdgeId f);

// Sorted vector set helpers used throughout (edge sets are kept as sorted
// EdgeId vectors everywhere).
std::vector<EdgeId> sorted_unique(std::vector<EdgeId> ids);
bool contains(const std::vector<EdgeId>& sorted_ids, EdgeId e);
std::vector<EdgeId> set_union(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b);
std::vector<EdgeId> set_minus(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b);
std::vector<EdgeId> set_intersect(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b);

}  // namespace quell
