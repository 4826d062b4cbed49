#include "quell/reductions.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace quell {

const char* reduction_kind_name(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::TwoCutSplit: return "TwoCutSplit";
    case ReductionKind::ThreeCutSplit: return "ThreeCutSplit";
    case ReductionKind::AlphaBetaGammaDelta: return "AlphaBetaGammaDelta";
    case ReductionKind::DoubleReduction: return "DoubleReduction";
    case ReductionKind::TriangleExpansion: return "TriangleExpansion";
  }
  return "?";
}

namespace {

CubicGraph make_graph(int n, const std::vector<Edge>& edges) {
  bool loops = false;
  for (const Edge& e : edges) loops = loops || e.u == e.v;
  return CubicGraph(n, edges, loops);
}

void require_bridgeless_child(const CubicGraph& child) {
  if (!is_connected(child))
    throw GraphError(ErrorCode::ChildHasBridge, "reduction child is disconnected");
  if (!find_bridges(child).empty())
    throw GraphError(ErrorCode::ChildHasBridge, "reduction child has a bridge");
}

// Validates that the cut's sides partition the vertices and that its crossing
// set is exactly the edges between them, with the expected size.  Returns the
// side (0/1) of every vertex.
std::vector<char> validate_cut(const CubicGraph& g, const EdgeCut& cut, int size,
                               ErrorCode code) {
  const int n = g.vertex_count();
  std::vector<char> side(n, -1);
  auto place = [&](const std::vector<VertexId>& vs, char s) {
    for (VertexId v : vs) {
      if (v < 0 || v >= n || side[v] != -1)
        throw GraphError(code, "cut sides do not partition the vertex set");
      side[v] = s;
    }
  };
  place(cut.side1, 0);
  place(cut.side2, 1);
  for (char s : side)
    if (s == -1) throw GraphError(code, "cut sides do not partition the vertex set");
  EdgeSet crossing;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (side[g.edge(e).u] != side[g.edge(e).v]) crossing.push_back(e);
  if (static_cast<int>(crossing.size()) != size || sorted_unique(cut.crossing) != crossing)
    throw GraphError(code, "crossing set does not match the cut sides");
  return side;
}

struct SideBuild {
  std::vector<VertexId> to_parent;  // child vertex -> parent vertex
  std::vector<VertexId> to_child;   // parent vertex -> child vertex or -1
  std::vector<Edge> edges;
  std::vector<EdgeId> edge_to_parent;
};

SideBuild collect_side(const CubicGraph& g, const std::vector<char>& side, char s) {
  SideBuild b;
  b.to_child.assign(g.vertex_count(), -1);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (side[v] != s) continue;
    b.to_child[v] = static_cast<VertexId>(b.to_parent.size());
    b.to_parent.push_back(v);
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    VertexId u = g.edge(e).u, v = g.edge(e).v;
    if (side[u] == s && side[v] == s) {
      b.edges.push_back({b.to_child[u], b.to_child[v]});
      b.edge_to_parent.push_back(e);
    }
  }
  return b;
}

// Child edge ids whose parent edge lies in fs (which is sorted).
EdgeSet restrict_factor(const EdgeSet& fs, const std::vector<EdgeId>& edge_to_parent) {
  EdgeSet out;
  for (EdgeId ce = 0; ce < static_cast<EdgeId>(edge_to_parent.size()); ++ce)
    if (edge_to_parent[ce] >= 0 && contains(fs, edge_to_parent[ce])) out.push_back(ce);
  return out;
}

VertexId endpoint_on_side(const CubicGraph& g, const std::vector<char>& side, EdgeId e,
                          char s) {
  return side[g.edge(e).u] == s ? g.edge(e).u : g.edge(e).v;
}

void check_child_factor(const CubicGraph& child, const EdgeSet& f, const char* what) {
  if (!is_one_factor_plus(child, f))
    throw GraphError(ErrorCode::FactorCaseViolated,
                     std::string("induced child factor is not a 1+-factor (") + what + ")");
}

bool circuit_has_edge(const Circuit& c, EdgeId e) {
  return std::find(c.edges.begin(), c.edges.end(), e) != c.edges.end();
}

// Core of the endpoint-deletion reduction with all five role edges fixed by
// the caller: deletes u and v, keeps every other edge in id order, appends
// alpha-beta then gamma-delta.  Performs no validation beyond what the graph
// constructor enforces; callers check distinctness and bridges as
// appropriate.
ReductionTrace build_abgd(const CubicGraph& g, EdgeId f, VertexId u, VertexId v, EdgeId ua,
                          EdgeId ug, EdgeId vb, EdgeId vd) {
  ReductionTrace t;
  t.kind = ReductionKind::AlphaBetaGammaDelta;
  t.parent = g;
  t.u = u;
  t.v = v;
  t.alpha = g.other_end(ua, u);
  t.gamma = g.other_end(ug, u);
  t.beta = g.other_end(vb, v);
  t.delta = g.other_end(vd, v);
  t.f = f;
  t.e_u_alpha = ua;
  t.e_u_gamma = ug;
  t.e_v_beta = vb;
  t.e_v_delta = vd;

  ReducedGraph child;
  std::vector<VertexId> to_child(g.vertex_count(), -1);
  for (VertexId w = 0; w < g.vertex_count(); ++w) {
    if (w == u || w == v) continue;
    to_child[w] = static_cast<VertexId>(child.vertex_to_parent.size());
    child.vertex_to_parent.push_back(w);
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (e == f || e == ua || e == ug || e == vb || e == vd) continue;
    edges.push_back({to_child[g.edge(e).u], to_child[g.edge(e).v]});
    child.edge_to_parent.push_back(e);
  }
  edges.push_back({to_child[t.alpha], to_child[t.beta]});
  child.edge_to_parent.push_back(-1);
  t.new_alpha_beta = static_cast<EdgeId>(edges.size()) - 1;
  edges.push_back({to_child[t.gamma], to_child[t.delta]});
  child.edge_to_parent.push_back(-1);
  t.new_gamma_delta = static_cast<EdgeId>(edges.size()) - 1;
  child.graph = make_graph(static_cast<int>(child.vertex_to_parent.size()), edges);
  t.children.push_back(std::move(child));
  return t;
}

// The two incident edges of v other than one occurrence of `skip`, in id order.
std::pair<EdgeId, EdgeId> other_slots(const CubicGraph& g, VertexId v, EdgeId skip) {
  std::vector<EdgeId> rest = g.incident(v);
  auto it = std::find(rest.begin(), rest.end(), skip);
  rest.erase(it);
  return {rest[0], rest[1]};
}

void map_into(const EdgeSet& child_m, const std::vector<EdgeId>& edge_to_parent,
              PerfectMatching& out) {
  for (EdgeId e : child_m) {
    EdgeId p = edge_to_parent[e];
    if (p >= 0) out.push_back(p);
  }
}

const ReducedGraph& only_child(const ReductionTrace& t) { return t.children.at(0); }

void require_kind(const ReductionTrace& t, ReductionKind k) {
  if (t.kind != k)
    throw GraphError(ErrorCode::PreconditionViolated,
                     std::string("trace kind is ") + reduction_kind_name(t.kind) +
                         ", expected " + reduction_kind_name(k));
}

}  // namespace

// ---- 2-edge-cut splitting --------------------------------------------------

ReductionTrace two_cut_split(const CubicGraph& g, const EdgeCut& cut,
                             const OneFactorPlus& factor) {
  std::vector<char> side = validate_cut(g, cut, 2, ErrorCode::NotA2Cut);
  EdgeSet fs = sorted_unique(factor);
  if (!is_one_factor_plus(g, fs))
    throw GraphError(ErrorCode::NotOneFactorPlus, "factor is not a 1+-factor");
  EdgeSet crossing = sorted_unique(cut.crossing);
  EdgeSet meet = set_intersect(fs, crossing);
  bool meets = meet.size() == 2;
  if (meet.size() == 1)
    throw GraphError(ErrorCode::FactorCaseViolated, "factor meets the cut in exactly one edge");
  if (meet.empty()) {
    ComplementComponents comp = complement_components(g, fs);
    bool together = false;
    for (const Circuit& c : comp.circuits)
      together = together || (circuit_has_edge(c, crossing[0]) && circuit_has_edge(c, crossing[1]));
    if (!together)
      throw GraphError(ErrorCode::FactorCaseViolated,
                       "cut edges avoid the factor but do not share a complement circuit");
  }

  ReductionTrace t;
  t.kind = ReductionKind::TwoCutSplit;
  t.parent = g;
  t.cut = crossing;
  t.factor_meets_cut = meets;
  for (char s = 0; s < 2; ++s) {
    SideBuild b = collect_side(g, side, s);
    VertexId a1 = endpoint_on_side(g, side, crossing[0], s);
    VertexId a2 = endpoint_on_side(g, side, crossing[1], s);
    b.edges.push_back({b.to_child[a1], b.to_child[a2]});
    b.edge_to_parent.push_back(-1);
    EdgeId fresh = static_cast<EdgeId>(b.edges.size()) - 1;
    (s == 0 ? t.new_edges1 : t.new_edges2) = {fresh};
    ReducedGraph child;
    child.graph = make_graph(static_cast<int>(b.to_parent.size()), b.edges);
    child.vertex_to_parent = std::move(b.to_parent);
    child.edge_to_parent = std::move(b.edge_to_parent);
    require_bridgeless_child(child.graph);
    child.factor = restrict_factor(fs, child.edge_to_parent);
    if (meets) child.factor.push_back(fresh);
    check_child_factor(child.graph, child.factor, "2-cut side");
    t.children.push_back(std::move(child));
  }
  return t;
}

PerfectMatching lift_two_cut(const ReductionTrace& t, const PerfectMatching& m1,
                             const PerfectMatching& m2, int e_side) {
  require_kind(t, ReductionKind::TwoCutSplit);
  if (e_side != 0 && e_side != 1)
    throw GraphError(ErrorCode::BadIndex, "e_side must be 0 or 1");
  EdgeSet ms1 = sorted_unique(m1), ms2 = sorted_unique(m2);
  if (!is_perfect_matching(t.children[0].graph, ms1))
    throw GraphError(ErrorCode::NotPerfectInChild, "first matching is not perfect in child 0");
  if (!is_perfect_matching(t.children[1].graph, ms2))
    throw GraphError(ErrorCode::NotPerfectInChild, "second matching is not perfect in child 1");
  bool in1 = contains(ms1, t.new_edges1[0]);
  bool in2 = contains(ms2, t.new_edges2[0]);
  if (in1 != in2)
    throw GraphError(ErrorCode::InconsistentCutParity,
                     "children disagree about matching their new edge");
  PerfectMatching out;
  map_into(ms1, t.children[0].edge_to_parent, out);
  map_into(ms2, t.children[1].edge_to_parent, out);
  if (in1) out.insert(out.end(), t.cut.begin(), t.cut.end());
  return sorted_unique(out);
}

// ---- cyclic 3-edge-cut splitting -------------------------------------------

ReductionTrace three_cut_split(const CubicGraph& g, const EdgeCut& cut,
                               const OneFactorPlus& factor) {
  std::vector<char> side = validate_cut(g, cut, 3, ErrorCode::NotACyclic3Cut);
  int vcount[2] = {0, 0}, ecount[2] = {0, 0};
  for (VertexId v = 0; v < g.vertex_count(); ++v) ++vcount[side[v] != 0];
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    char a = side[g.edge(e).u], b = side[g.edge(e).v];
    if (a == b) ++ecount[a != 0];
  }
  for (int s = 0; s < 2; ++s)
    if (ecount[s] < vcount[s])
      throw GraphError(ErrorCode::NotACyclic3Cut, "cut side spans no circuit");
  EdgeSet fs = sorted_unique(factor);
  if (!is_one_factor_plus(g, fs))
    throw GraphError(ErrorCode::NotOneFactorPlus, "factor is not a 1+-factor");
  EdgeSet crossing = sorted_unique(cut.crossing);
  EdgeSet meet = set_intersect(fs, crossing);
  if (meet.size() % 2 == 0)
    throw GraphError(ErrorCode::EvenIntersection,
                     "factor meets the cut in an even number of edges");
  std::vector<EdgeId> order;
  if (meet.size() == 1) {
    order.push_back(meet[0]);
    for (EdgeId c : crossing)
      if (c != meet[0]) order.push_back(c);
  } else {
    order = crossing;
  }
  bool all3 = meet.size() == 3;

  ReductionTrace t;
  t.kind = ReductionKind::ThreeCutSplit;
  t.parent = g;
  t.cut = order;
  t.factor_meets_cut = all3;
  for (char s = 0; s < 2; ++s) {
    SideBuild b = collect_side(g, side, s);
    VertexId apex = static_cast<VertexId>(b.to_parent.size());
    std::vector<EdgeId> pendants;
    for (EdgeId c : order) {
      VertexId a = endpoint_on_side(g, side, c, s);
      b.edges.push_back({b.to_child[a], apex});
      b.edge_to_parent.push_back(-1);
      pendants.push_back(static_cast<EdgeId>(b.edges.size()) - 1);
    }
    b.to_parent.push_back(-1);  // the apex is new
    ReducedGraph child;
    child.graph = make_graph(static_cast<int>(b.to_parent.size()), b.edges);
    child.vertex_to_parent = std::move(b.to_parent);
    child.edge_to_parent = std::move(b.edge_to_parent);
    require_bridgeless_child(child.graph);
    child.factor = restrict_factor(fs, child.edge_to_parent);
    child.factor.push_back(pendants[0]);
    if (all3) {
      child.factor.push_back(pendants[1]);
      child.factor.push_back(pendants[2]);
    }
    check_child_factor(child.graph, child.factor, "3-cut side");
    (s == 0 ? t.new_edges1 : t.new_edges2) = std::move(pendants);
    t.children.push_back(std::move(child));
  }
  return t;
}

PerfectMatching lift_three_cut(const ReductionTrace& t, const PerfectMatching& m1,
                               const PerfectMatching& m2, int pendant_index) {
  require_kind(t, ReductionKind::ThreeCutSplit);
  if (pendant_index < 1 || pendant_index > 3)
    throw GraphError(ErrorCode::BadIndex, "pendant index must be 1, 2 or 3");
  EdgeSet ms1 = sorted_unique(m1), ms2 = sorted_unique(m2);
  if (!is_perfect_matching(t.children[0].graph, ms1))
    throw GraphError(ErrorCode::NotPerfectInChild, "first matching is not perfect in child 0");
  if (!is_perfect_matching(t.children[1].graph, ms2))
    throw GraphError(ErrorCode::NotPerfectInChild, "second matching is not perfect in child 1");
  if (!contains(ms1, t.new_edges1[pendant_index - 1]) ||
      !contains(ms2, t.new_edges2[pendant_index - 1]))
    throw GraphError(ErrorCode::PendantIndexMismatch,
                     "children do not both match the requested pendant");
  PerfectMatching out;
  map_into(ms1, t.children[0].edge_to_parent, out);
  map_into(ms2, t.children[1].edge_to_parent, out);
  out.push_back(t.cut[pendant_index - 1]);
  return sorted_unique(out);
}

// ---- endpoint deletion -----------------------------------------------------

ReductionTrace abgd_reduction(const CubicGraph& g, EdgeId f, bool cross_pairing) {
  if (f < 0 || f >= g.edge_count())
    throw GraphError(ErrorCode::BadIndex, "edge id out of range");
  if (g.is_loop(f)) throw GraphError(ErrorCode::LoopEdge, "cannot reduce on a loop");
  VertexId u = std::min(g.edge(f).u, g.edge(f).v);
  VertexId v = std::max(g.edge(f).u, g.edge(f).v);
  auto [ua, ug] = other_slots(g, u, f);
  auto [vb, vd] = other_slots(g, v, f);
  if (cross_pairing) std::swap(vb, vd);
  VertexId outer[4] = {g.other_end(ua, u), g.other_end(vb, v), g.other_end(ug, u),
                       g.other_end(vd, v)};
  for (int i = 0; i < 4; ++i) {
    if (outer[i] == u || outer[i] == v)
      throw GraphError(ErrorCode::DegenerateNeighbourhood,
                       "an outer vertex coincides with an endpoint of f");
    for (int j = i + 1; j < 4; ++j)
      if (outer[i] == outer[j])
        throw GraphError(ErrorCode::DegenerateNeighbourhood, "outer vertices are not distinct");
  }
  ReductionTrace t = build_abgd(g, f, u, v, ua, ug, vb, vd);
  require_bridgeless_child(t.children[0].graph);
  return t;
}

OneFactorPlus abgd_induce_factor(const ReductionTrace& t, const OneFactorPlus& factor) {
  require_kind(t, ReductionKind::AlphaBetaGammaDelta);
  EdgeSet fs = sorted_unique(factor);
  if (!is_one_factor_plus(t.parent, fs))
    throw GraphError(ErrorCode::NotOneFactorPlus, "factor is not a 1+-factor");
  bool ff = contains(fs, t.f);
  bool a = contains(fs, t.e_u_alpha), gg = contains(fs, t.e_u_gamma);
  bool b = contains(fs, t.e_v_beta), d = contains(fs, t.e_v_delta);
  const ReducedGraph& child = only_child(t);
  OneFactorPlus out;
  if (ff && a && gg && b && d) {
    out = restrict_factor(fs, child.edge_to_parent);
    out.push_back(t.new_alpha_beta);
    out.push_back(t.new_gamma_delta);
  } else if (!ff && (a != gg) && (b != d) && a == b) {
    out = restrict_factor(fs, child.edge_to_parent);
    out.push_back(a ? t.new_alpha_beta : t.new_gamma_delta);
  } else {
    throw GraphError(ErrorCode::FactorCaseViolated,
                     "factor does not fit either transferable configuration at f");
  }
  check_child_factor(child.graph, out, "endpoint deletion");
  return out;
}

PerfectMatching lift_abgd(const ReductionTrace& t, const PerfectMatching& child_m) {
  require_kind(t, ReductionKind::AlphaBetaGammaDelta);
  EdgeSet ms = sorted_unique(child_m);
  const ReducedGraph& child = only_child(t);
  if (!is_perfect_matching(child.graph, ms))
    throw GraphError(ErrorCode::NotPerfectInChild, "matching is not perfect in the child");
  bool ab = contains(ms, t.new_alpha_beta);
  bool gd = contains(ms, t.new_gamma_delta);
  if (ab && gd)
    throw GraphError(ErrorCode::ConflictingLift,
                     "both new edges are matched; no parent matching covers u and v once");
  PerfectMatching out;
  map_into(ms, child.edge_to_parent, out);
  if (ab) {
    out.push_back(t.e_u_alpha);
    out.push_back(t.e_v_beta);
  } else if (gd) {
    out.push_back(t.e_u_gamma);
    out.push_back(t.e_v_delta);
  } else {
    out.push_back(t.f);
  }
  return sorted_unique(out);
}

// ---- double reduction ------------------------------------------------------

ReductionTrace double_reduction(const CubicGraph& g, EdgeId f, const OneFactorPlus& factor,
                                EdgeId alpha_edge, EdgeId beta_edge) {
  const int m = g.edge_count();
  if (f < 0 || f >= m || alpha_edge < 0 || alpha_edge >= m || beta_edge < 0 || beta_edge >= m)
    throw GraphError(ErrorCode::BadIndex, "edge id out of range");
  if (g.is_loop(f)) throw GraphError(ErrorCode::LoopEdge, "cannot reduce on a loop");
  EdgeSet fs = sorted_unique(factor);
  if (!is_one_factor_plus(g, fs))
    throw GraphError(ErrorCode::NotOneFactorPlus, "factor is not a 1+-factor");
  if (!contains(fs, f))
    throw GraphError(ErrorCode::ConfigurationMismatch, "f must belong to the factor");
  if (alpha_edge == f || beta_edge == f)
    throw GraphError(ErrorCode::ConfigurationMismatch, "role edges must differ from f");

  // Orient f so that alpha_edge hangs off u.
  VertexId fu = g.edge(f).u, fv = g.edge(f).v;
  bool at_u = g.incident_to(alpha_edge, fu), at_v = g.incident_to(alpha_edge, fv);
  if (at_u == at_v)
    throw GraphError(ErrorCode::ConfigurationMismatch,
                     "alpha_edge must touch exactly one endpoint of f");
  VertexId u = at_u ? fu : fv;
  VertexId v = at_u ? fv : fu;
  if (!g.incident_to(beta_edge, v) || g.incident_to(beta_edge, u))
    throw GraphError(ErrorCode::ConfigurationMismatch,
                     "beta_edge must touch only the far endpoint of f");
  VertexId alpha = g.other_end(alpha_edge, u);
  VertexId beta = g.other_end(beta_edge, v);
  EdgeId ug = 0, vd = 0;
  {
    auto [p, q] = other_slots(g, u, f);
    ug = (p == alpha_edge) ? q : p;
    auto [r, s2] = other_slots(g, v, f);
    vd = (r == beta_edge) ? s2 : r;
  }
  VertexId gamma = g.other_end(ug, u);
  VertexId delta = g.other_end(vd, v);
  for (VertexId c : {alpha, beta, gamma, delta})
    if (c == u || c == v)
      throw GraphError(ErrorCode::ConfigurationMismatch,
                       "an outer vertex coincides with an endpoint of f");
  if (contains(fs, beta_edge) || contains(fs, vd))
    throw GraphError(ErrorCode::ConfigurationMismatch,
                     "both non-f edges at v must be outside the factor");

  // Walk the complement circuit past beta: w is beta's factor-neighbour,
  // y continues the circuit; then x and z likewise around y.
  auto split_by_factor = [&](VertexId at, EdgeId skip, const char* where) {
    auto [p, q] = other_slots(g, at, skip);
    bool pf = contains(fs, p), qf = contains(fs, q);
    if (pf == qf)
      throw GraphError(ErrorCode::ConfigurationMismatch,
                       std::string("expected one factor edge and one complement edge at ") + where);
    EdgeId in_f = pf ? p : q, out_f = pf ? q : p;
    return std::pair<EdgeId, EdgeId>(in_f, out_f);
  };
  auto [wb, by] = split_by_factor(beta, beta_edge, "beta");
  VertexId w = g.other_end(wb, beta);
  VertexId y = g.other_end(by, beta);
  if (y == u || y == v || y == beta)
    throw GraphError(ErrorCode::ConfigurationMismatch, "circuit walk folds back into {u, v, beta}");
  auto [xy, yz] = split_by_factor(y, by, "y");
  VertexId x = g.other_end(xy, y);
  VertexId z = g.other_end(yz, y);
  for (VertexId c : {alpha, gamma, delta, w, x, z})
    if (c == u || c == v || c == beta || c == y)
      throw GraphError(ErrorCode::ConfigurationMismatch,
                       "a contact vertex lies in the deleted set {u, v, beta, y}");
  if (z == delta)
    throw GraphError(ErrorCode::ConfigurationMismatch,
                     "the five circuit vertices delta, v, beta, y, z are not distinct");

  // The two non-factor edges at v must sit on one odd complement circuit of
  // length at least 5.
  {
    ComplementComponents comp = complement_components(g, fs);
    const Circuit* on = nullptr;
    for (const Circuit& c : comp.circuits)
      if (circuit_has_edge(c, beta_edge)) on = &c;
    if (on == nullptr)
      throw GraphError(ErrorCode::ConfigurationMismatch,
                       "v's non-factor edges do not lie on a complement circuit");
    if (!on->odd() || on->vertices.size() < 5)
      throw GraphError(ErrorCode::ConfigurationMismatch,
                       "the complement circuit through v is not odd of length >= 5");
  }

  ReductionTrace step1 = build_abgd(g, f, u, v, alpha_edge, ug, beta_edge, vd);
  const ReducedGraph& c1 = step1.children[0];
  std::vector<VertexId> vmap1(g.vertex_count(), -1);
  for (VertexId cv = 0; cv < static_cast<VertexId>(c1.vertex_to_parent.size()); ++cv)
    vmap1[c1.vertex_to_parent[cv]] = cv;
  std::vector<EdgeId> emap1(m, -1);
  for (EdgeId ce = 0; ce < static_cast<EdgeId>(c1.edge_to_parent.size()); ++ce)
    if (c1.edge_to_parent[ce] >= 0) emap1[c1.edge_to_parent[ce]] = ce;

  ReductionTrace step2 = build_abgd(c1.graph, emap1[by], vmap1[beta], vmap1[y],
                                    step1.new_alpha_beta, emap1[wb], emap1[xy], emap1[yz]);
  const ReducedGraph& c2 = step2.children[0];

  ReductionTrace t;
  t.kind = ReductionKind::DoubleReduction;
  t.parent = g;
  t.u = u;
  t.v = v;
  t.alpha = alpha;
  t.beta = beta;
  t.gamma = gamma;
  t.delta = delta;
  t.f = f;
  t.e_u_alpha = alpha_edge;
  t.e_u_gamma = ug;
  t.e_v_beta = beta_edge;
  t.e_v_delta = vd;
  t.y = y;
  t.z = z;
  t.w = w;
  t.x = x;
  t.e_beta_y = by;
  t.e_y_z = yz;
  t.e_w_beta = wb;
  t.e_x_y = xy;
  t.new_alpha_x = step2.new_alpha_beta;
  t.new_w_z = step2.new_gamma_delta;
  t.new_gamma_delta = -1;

  ReducedGraph final_child;
  final_child.graph = c2.graph;
  final_child.vertex_to_parent.resize(c2.vertex_to_parent.size());
  for (size_t i = 0; i < c2.vertex_to_parent.size(); ++i)
    final_child.vertex_to_parent[i] = c1.vertex_to_parent[c2.vertex_to_parent[i]];
  final_child.edge_to_parent.resize(c2.edge_to_parent.size());
  for (EdgeId ce = 0; ce < static_cast<EdgeId>(c2.edge_to_parent.size()); ++ce) {
    EdgeId mid = c2.edge_to_parent[ce];
    final_child.edge_to_parent[ce] = mid < 0 ? -1 : c1.edge_to_parent[mid];
    if (mid == step1.new_gamma_delta) t.new_gamma_delta = ce;
  }
  if (t.new_gamma_delta < 0)
    throw GraphError(ErrorCode::ConfigurationMismatch,
                     "the gamma-delta edge did not survive the second deletion");
  require_bridgeless_child(final_child.graph);

  for (EdgeId ce = 0; ce < static_cast<EdgeId>(final_child.edge_to_parent.size()); ++ce) {
    EdgeId p = final_child.edge_to_parent[ce];
    if (p >= 0 && contains(fs, p)) final_child.factor.push_back(ce);
  }
  final_child.factor = set_union(
      final_child.factor, sorted_unique({t.new_gamma_delta, t.new_alpha_x, t.new_w_z}));
  check_child_factor(final_child.graph, final_child.factor, "double reduction");

  t.children.push_back(std::move(final_child));
  t.steps.push_back(std::move(step1));
  t.steps.push_back(std::move(step2));
  return t;
}

PerfectMatching lift_double(const ReductionTrace& t, const PerfectMatching& child_m) {
  require_kind(t, ReductionKind::DoubleReduction);
  EdgeSet ms = sorted_unique(child_m);
  if (!is_perfect_matching(t.children[0].graph, ms))
    throw GraphError(ErrorCode::NotPerfectInChild, "matching is not perfect in the child");
  PerfectMatching middle = lift_abgd(t.steps[1], ms);
  return lift_abgd(t.steps[0], middle);
}

// ---- triangle expansion ----------------------------------------------------

ReductionTrace expand_to_triangles(const CubicGraph& g, const CircuitSet& circuits) {
  const int n = g.vertex_count(), m = g.edge_count();
  std::vector<char> kept(n, 0);
  for (const Circuit& c : circuits) {
    const int k = static_cast<int>(c.vertices.size());
    if (k == 0 || static_cast<int>(c.edges.size()) != k)
      throw GraphError(ErrorCode::PreconditionViolated, "malformed circuit");
    for (int i = 0; i < k; ++i) {
      VertexId a = c.vertices[i], b = c.vertices[(i + 1) % k];
      EdgeId e = c.edges[i];
      if (a < 0 || a >= n || e < 0 || e >= m)
        throw GraphError(ErrorCode::PreconditionViolated, "circuit index out of range");
      VertexId eu = g.edge(e).u, ev = g.edge(e).v;
      if (!((eu == a && ev == b) || (eu == b && ev == a)))
        throw GraphError(ErrorCode::PreconditionViolated,
                         "circuit edge does not join consecutive circuit vertices");
      for (int j = i + 1; j < k; ++j) {
        if (c.vertices[i] == c.vertices[j])
          throw GraphError(ErrorCode::PreconditionViolated, "circuit repeats a vertex");
        if (c.edges[i] == c.edges[j])
          throw GraphError(ErrorCode::PreconditionViolated, "circuit repeats an edge");
      }
    }
    for (VertexId a : c.vertices) {
      if (kept[a]) throw GraphError(ErrorCode::CircuitsNotDisjoint, "circuits share a vertex");
      kept[a] = 1;
    }
  }

  ReductionTrace t;
  t.kind = ReductionKind::TriangleExpansion;
  t.parent = g;
  t.parent_edge_count = m;
  ReducedGraph child;
  std::vector<VertexId> v2child(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    if (!kept[v]) continue;
    v2child[v] = static_cast<VertexId>(child.vertex_to_parent.size());
    child.vertex_to_parent.push_back(v);
  }
  std::vector<std::array<VertexId, 3>> corner(n, {-1, -1, -1});
  for (VertexId v = 0; v < n; ++v) {
    if (kept[v]) continue;
    t.expanded.push_back(v);
    for (int s = 0; s < 3; ++s) {
      corner[v][s] = static_cast<VertexId>(child.vertex_to_parent.size());
      child.vertex_to_parent.push_back(v);
    }
  }
  // Parent edges keep their ids; each incidence slot of an expanded vertex
  // feeds its own corner, so a loop's two slots give it two distinct ends.
  std::vector<Edge> edges(m, {-1, -1});
  for (VertexId v = 0; v < n; ++v) {
    const std::vector<EdgeId>& inc = g.incident(v);
    for (int s = 0; s < 3; ++s) {
      EdgeId e = inc[s];
      VertexId cv = kept[v] ? v2child[v] : corner[v][s];
      if (!g.is_loop(e)) {
        if (g.edge(e).u == v)
          edges[e].u = cv;
        else
          edges[e].v = cv;
      } else {
        if (edges[e].u == -1)
          edges[e].u = cv;
        else
          edges[e].v = cv;
      }
    }
  }
  child.edge_to_parent.resize(m);
  for (EdgeId e = 0; e < m; ++e) child.edge_to_parent[e] = e;
  for (VertexId v : t.expanded) {
    const std::array<VertexId, 3>& c = corner[v];
    std::array<EdgeId, 3> ids;
    const Edge tri[3] = {{c[0], c[1]}, {c[0], c[2]}, {c[1], c[2]}};
    for (int i = 0; i < 3; ++i) {
      edges.push_back(tri[i]);
      child.edge_to_parent.push_back(-1);
      ids[i] = static_cast<EdgeId>(edges.size()) - 1;
    }
    t.triangle_edges.push_back(ids);
  }
  child.graph = make_graph(static_cast<int>(child.vertex_to_parent.size()), edges);
  t.children.push_back(std::move(child));
  return t;
}

PerfectMatching project_from_expansion(const ReductionTrace& t, const PerfectMatching& child_m) {
  require_kind(t, ReductionKind::TriangleExpansion);
  EdgeSet ms = sorted_unique(child_m);
  if (!is_perfect_matching(t.children[0].graph, ms))
    throw GraphError(ErrorCode::NotPerfectInChild, "matching is not perfect in the child");
  PerfectMatching out;
  for (EdgeId e : ms)
    if (e < t.parent_edge_count) out.push_back(e);
  if (!is_perfect_matching(t.parent, out))
    throw GraphError(ErrorCode::PreconditionViolated,
                     "matching takes all three outer edges of some triangle and cannot project");
  return out;
}

// ---- summaries -------------------------------------------------------------

namespace {
void print_ids(std::ostringstream& os, const std::vector<EdgeId>& v) {
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
}
}  // namespace

std::string trace_summary(const ReductionTrace& t) {
  std::ostringstream os;
  os << reduction_kind_name(t.kind);
  switch (t.kind) {
    case ReductionKind::TwoCutSplit:
      os << " cut=";
      print_ids(os, t.cut);
      os << " children=" << t.children[0].graph.vertex_count() << "v+"
         << t.children[1].graph.vertex_count() << "v new=" << t.new_edges1[0] << "|"
         << t.new_edges2[0] << " factor_cut=" << (t.factor_meets_cut ? "yes" : "no");
      break;
    case ReductionKind::ThreeCutSplit:
      os << " cut=";
      print_ids(os, t.cut);
      os << " children=" << t.children[0].graph.vertex_count() << "v+"
         << t.children[1].graph.vertex_count() << "v pendants=";
      print_ids(os, t.new_edges1);
      os << "|";
      print_ids(os, t.new_edges2);
      os << " factor_cut=" << (t.factor_meets_cut ? "all" : "one");
      break;
    case ReductionKind::AlphaBetaGammaDelta:
      os << " f=" << t.f << " u=" << t.u << " v=" << t.v << " outer=[" << t.alpha << ","
         << t.beta << "," << t.gamma << "," << t.delta << "] new=[" << t.new_alpha_beta << ","
         << t.new_gamma_delta << "]";
      break;
    case ReductionKind::DoubleReduction:
      os << " f=" << t.f << " u=" << t.u << " v=" << t.v << " beta=" << t.beta << " y=" << t.y
         << " new=[" << t.new_gamma_delta << "," << t.new_alpha_x << "," << t.new_w_z << "]";
      break;
    case ReductionKind::TriangleExpansion:
      os << " expanded=" << t.expanded.size() << " child=" << t.children[0].graph.vertex_count()
         << "v" << t.children[0].graph.edge_count() << "e";
      break;
  }
  return os.str();
}

}  // namespace quell
