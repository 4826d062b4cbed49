#include "quell/solver.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

#include "quell/connectivity.hpp"
#include "quell/reductions.hpp"

namespace quell {

namespace {

using Sink = std::function<bool(const PerfectMatching&)>;

struct Ctx {
  SolveOptions opts;
  SolveStats stats;
  std::vector<std::string> path;
  bool oracle_used = false;
  std::chrono::steady_clock::time_point deadline{};
  bool has_deadline = false;

  void check_deadline() const {
    if (has_deadline && std::chrono::steady_clock::now() > deadline)
      throw GraphError(ErrorCode::SearchBudgetExceeded, "time budget exceeded");
  }
};

bool quelling_stream(Ctx& cx, const CubicGraph& g, const OneFactorPlus& factor,
                     EdgeId e, int depth, const Sink& emit);

EdgeId child_copy_of(const std::vector<EdgeId>& edge_to_parent, EdgeId parent_edge) {
  for (size_t c = 0; c < edge_to_parent.size(); ++c)
    if (edge_to_parent[c] == parent_edge) return static_cast<EdgeId>(c);
  return -1;
}

// The structural stages need a parity factor whose complement is a union of
// odd circuits; extend when the given factor is not already of that shape.
OneFactorPlus normalised_join(const CubicGraph& g, const OneFactorPlus& factor, EdgeId e) {
  if (contains(factor, e) && is_parity_subgraph(g, factor)) {
    ComplementComponents cc = complement_components(g, factor);
    bool all_odd = cc.paths.empty();
    for (const Circuit& c : cc.circuits)
      if (!c.odd()) all_odd = false;
    if (all_odd) return factor;
  }
  OneFactorPlus base = factor;
  if (!contains(base, e)) {
    base.push_back(e);
    std::sort(base.begin(), base.end());
  }
  return extend_to_maximal_join(g, base);
}

int degree_in(const CubicGraph& g, const EdgeSet& set, VertexId v) {
  int d = 0;
  for (EdgeId x : g.incident(v))
    if (contains(set, x)) ++d;
  return d;
}

// Edges at distance exactly two from e: vertex-disjoint from e but sharing an
// endpoint with an edge incident to e.
std::vector<EdgeId> distance_two_edges(const CubicGraph& g, EdgeId e) {
  VertexId a = g.edge(e).u, b = g.edge(e).v;
  std::set<EdgeId> out;
  for (VertexId end : {a, b})
    for (EdgeId h : g.incident(end)) {
      if (h == e) continue;
      VertexId mid = g.other_end(h, end);
      if (mid == a || mid == b) continue;
      for (EdgeId f : g.incident(mid)) {
        Edge ed = g.edge(f);
        if (ed.u == a || ed.u == b || ed.v == a || ed.v == b) continue;
        out.insert(f);
      }
    }
  return {out.begin(), out.end()};
}

// ---- 2-cut stage ----------------------------------------------------------

bool stream_two_cut(Ctx& cx, const CubicGraph& g, const OneFactorPlus& join,
                    EdgeId e, int depth, const EdgeCut& cut, const Sink& accept) {
  ReductionTrace t = two_cut_split(g, cut, join);
  ++cx.stats.reductions_applied;
  const ReducedGraph& a = t.children[0];
  const ReducedGraph& b = t.children[1];
  EdgeId new_a = t.new_edges1[0], new_b = t.new_edges2[0];

  auto lift_emit = [&](const PerfectMatching& m1, const PerfectMatching& m2) {
    PerfectMatching m = lift_two_cut(t, m1, m2, 0);
    bool cont = accept(m);
    if (!cont) cx.path.push_back(trace_summary(t));
    return cont;
  };

  if (contains(t.cut, e)) {
    // the matching must take the whole cut: seed both children with their
    // replacement edge
    return quelling_stream(cx, a.graph, a.factor, new_a, depth + 1,
                           [&](const PerfectMatching& m1) {
      return quelling_stream(cx, b.graph, b.factor, new_b, depth + 1,
                             [&](const PerfectMatching& m2) {
        return lift_emit(m1, m2);
      });
    });
  }

  int side = child_copy_of(a.edge_to_parent, e) >= 0 ? 0 : 1;
  const ReducedGraph& s = side == 0 ? a : b;
  const ReducedGraph& o = side == 0 ? b : a;
  EdgeId new_s = side == 0 ? new_a : new_b;
  EdgeId new_o = side == 0 ? new_b : new_a;
  EdgeId ec = child_copy_of(s.edge_to_parent, e);

  return quelling_stream(cx, s.graph, s.factor, ec, depth + 1,
                         [&](const PerfectMatching& m1) {
    auto pair_emit = [&](const PerfectMatching& m2) {
      return side == 0 ? lift_emit(m1, m2) : lift_emit(m2, m1);
    };
    if (contains(m1, new_s)) {
      // the near matching crosses the cut, so the far one must as well
      return quelling_stream(cx, o.graph, o.factor, new_o, depth + 1, pair_emit);
    }
    // force the far replacement edge OUT by requiring an adjacent edge,
    // least id first, backtracking over all of them
    std::vector<EdgeId> blockers;
    for (VertexId end : {o.graph.edge(new_o).u, o.graph.edge(new_o).v})
      for (EdgeId h : o.graph.incident(end))
        if (h != new_o) blockers.push_back(h);
    blockers = sorted_unique(blockers);
    for (EdgeId third : blockers) {
      if (!quelling_stream(cx, o.graph, o.factor, third, depth + 1, pair_emit))
        return false;
    }
    return true;
  });
}

// ---- cyclic 3-cut stage ---------------------------------------------------

bool stream_three_cut(Ctx& cx, const CubicGraph& g, const OneFactorPlus& join,
                      EdgeId e, int depth, const EdgeCut& cut, const Sink& accept) {
  ReductionTrace t = three_cut_split(g, cut, join);
  ++cx.stats.reductions_applied;
  const ReducedGraph& a = t.children[0];
  const ReducedGraph& b = t.children[1];

  auto lift_emit = [&](const PerfectMatching& m1, const PerfectMatching& m2, int i) {
    PerfectMatching m = lift_three_cut(t, m1, m2, i);
    bool cont = accept(m);
    if (!cont) cx.path.push_back(trace_summary(t));
    return cont;
  };

  auto cut_pos = std::find(t.cut.begin(), t.cut.end(), e);
  if (cut_pos != t.cut.end()) {
    int i = static_cast<int>(cut_pos - t.cut.begin()) + 1;
    return quelling_stream(cx, a.graph, a.factor, t.new_edges1[i - 1], depth + 1,
                           [&](const PerfectMatching& m1) {
      return quelling_stream(cx, b.graph, b.factor, t.new_edges2[i - 1], depth + 1,
                             [&](const PerfectMatching& m2) {
        return lift_emit(m1, m2, i);
      });
    });
  }

  int side = child_copy_of(a.edge_to_parent, e) >= 0 ? 0 : 1;
  const ReducedGraph& s = side == 0 ? a : b;
  const ReducedGraph& o = side == 0 ? b : a;
  const std::vector<EdgeId>& pend_s = side == 0 ? t.new_edges1 : t.new_edges2;
  const std::vector<EdgeId>& pend_o = side == 0 ? t.new_edges2 : t.new_edges1;
  EdgeId ec = child_copy_of(s.edge_to_parent, e);

  return quelling_stream(cx, s.graph, s.factor, ec, depth + 1,
                         [&](const PerfectMatching& m1) {
    int i = 0;  // each child matching covers the apex by exactly one pendant
    for (int k = 0; k < 3; ++k)
      if (contains(m1, pend_s[k])) i = k + 1;
    if (i == 0) return true;
    return quelling_stream(cx, o.graph, o.factor, pend_o[i - 1], depth + 1,
                           [&](const PerfectMatching& m2) {
      return side == 0 ? lift_emit(m1, m2, i) : lift_emit(m2, m1, i);
    });
  });
}

// ---- distance-2 stage -----------------------------------------------------

bool stream_single_deletion(Ctx& cx, const CubicGraph& g, const OneFactorPlus& join,
                            EdgeId e, int depth, EdgeId f, const Sink& accept) {
  for (bool cross : {false, true}) {
    ReductionTrace t;
    OneFactorPlus child_factor;
    try {
      t = abgd_reduction(g, f, cross);
      child_factor = abgd_induce_factor(t, join);
    } catch (const GraphError&) {
      continue;  // wrong pairing, degenerate neighbourhood or bridged child
    }
    ++cx.stats.reductions_applied;
    EdgeId ec = child_copy_of(t.children[0].edge_to_parent, e);
    if (ec < 0) continue;
    bool cont = quelling_stream(cx, t.children[0].graph, child_factor, ec, depth + 1,
                                [&](const PerfectMatching& cm) {
      PerfectMatching m;
      try {
        m = lift_abgd(t, cm);
      } catch (const GraphError&) {
        return true;  // child matching crosses both replacement edges
      }
      bool c = accept(m);
      if (!c) cx.path.push_back(trace_summary(t));
      return c;
    });
    if (!cont) return false;
  }
  return true;
}

bool stream_double_deletion(Ctx& cx, const CubicGraph& g, const OneFactorPlus& join,
                            EdgeId e, int depth, EdgeId f, VertexId walk_end,
                            const Sink& accept) {
  VertexId other = g.other_end(f, walk_end);
  std::vector<EdgeId> alphas, betas;
  for (EdgeId h : g.incident(other))
    if (h != f) alphas.push_back(h);
  for (EdgeId h : g.incident(walk_end))
    if (h != f) betas.push_back(h);
  for (EdgeId ae : sorted_unique(alphas))
    for (EdgeId be : sorted_unique(betas)) {
      ReductionTrace t;
      try {
        t = double_reduction(g, f, join, ae, be);
      } catch (const GraphError&) {
        continue;
      }
      ++cx.stats.reductions_applied;
      EdgeId ec = child_copy_of(t.children[0].edge_to_parent, e);
      if (ec < 0) continue;
      bool cont = quelling_stream(cx, t.children[0].graph, t.children[0].factor, ec,
                                  depth + 1, [&](const PerfectMatching& cm) {
        PerfectMatching m;
        try {
          m = lift_double(t, cm);
        } catch (const GraphError&) {
          return true;
        }
        bool c = accept(m);
        if (!c) cx.path.push_back(trace_summary(t));
        return c;
      });
      if (!cont) return false;
    }
  return true;
}

bool stage_distance_two(Ctx& cx, const CubicGraph& g, const OneFactorPlus& join,
                        EdgeId e, int depth, const Sink& accept) {
  std::vector<EdgeId> d2 = distance_two_edges(g, e);
  // outside the join first: a single deletion with the induced-factor swap
  for (EdgeId f : d2) {
    if (contains(join, f)) continue;
    if (!stream_single_deletion(cx, g, join, e, depth, f, accept)) return false;
  }
  for (EdgeId f : d2) {
    if (!contains(join, f)) continue;
    int du = degree_in(g, join, g.edge(f).u);
    int dv = degree_in(g, join, g.edge(f).v);
    if (du == 3 && dv == 3) {
      // every edge around f lies in the join: single deletion, factor case
      // that keeps both replacement edges in the child factor
      if (!stream_single_deletion(cx, g, join, e, depth, f, accept)) return false;
      continue;
    }
    for (VertexId end : {g.edge(f).u, g.edge(f).v}) {
      if (degree_in(g, join, end) != 1) continue;
      if (!stream_double_deletion(cx, g, join, e, depth, f, end, accept)) return false;
    }
  }
  return true;
}

// ---- the pipeline ---------------------------------------------------------

bool quelling_stream(Ctx& cx, const CubicGraph& g, const OneFactorPlus& factor,
                     EdgeId e, int depth, const Sink& emit) {
  cx.stats.max_depth = std::max(cx.stats.max_depth, depth);
  cx.check_deadline();

  auto accept = [&](const PerfectMatching& m) {
    cx.check_deadline();
    ++cx.stats.matchings_enumerated;
    if (!is_quelling_pair(g, factor, m).certificate) return true;
    return emit(m);
  };

  // A 3-edge-colouring settles the graph outright: the complement of the
  // colour class through e is a union of even circuits, so the class quells
  // every factor at once.
  if (auto colouring = three_edge_colouring(g)) {
    for (const PerfectMatching& cls : *colouring)
      if (contains(cls, e)) {
        if (!accept(cls)) return false;
        break;
      }
  }

  OneFactorPlus join = normalised_join(g, factor, e);
  try {
    std::optional<EdgeCut> cut2 = find_2_edge_cut(g);
    if (cut2) {
      if (!stream_two_cut(cx, g, join, e, depth, *cut2, accept)) return false;
    } else {
      std::optional<EdgeCut> cut3 = find_cyclic_3_edge_cut(g);
      if (cut3) {
        if (!stream_three_cut(cx, g, join, e, depth, *cut3, accept)) return false;
      } else {
        if (!stage_distance_two(cx, g, join, e, depth, accept)) return false;
      }
    }
  } catch (const GraphError& err) {
    // structural mismatch: fall through to the oracle stage
    if (err.code() == ErrorCode::SearchBudgetExceeded) throw;
  }

  if (!cx.opts.use_oracle) return true;
  if (g.vertex_count() > 20 && !cx.opts.allow_large_oracle)
    throw GraphError(ErrorCode::SearchBudgetExceeded,
                     "oracle enumeration refused beyond 20 vertices");
  bool stopped = false;
  for_each_perfect_matching_containing(g, e, [&](const PerfectMatching& m) {
    ++cx.stats.matchings_enumerated;
    if (!is_quelling_pair(g, factor, m).certificate) return true;
    if (emit(m)) return true;
    cx.oracle_used = true;
    stopped = true;
    return false;
  });
  return !stopped;
}

}  // namespace

std::optional<PerfectMatching> oracle_quelling_matching(const CubicGraph& g,
                                                        const OneFactorPlus& factor,
                                                        EdgeId e) {
  std::optional<PerfectMatching> out;
  for_each_perfect_matching_containing(g, e, [&](const PerfectMatching& m) {
    if (!is_quelling_pair(g, factor, m).certificate) return true;
    out = m;
    return false;
  });
  return out;
}

SolveReport find_quelling_matching(const CubicGraph& g, const OneFactorPlus& factor,
                                   EdgeId e, const SolveOptions& options) {
  auto start = std::chrono::steady_clock::now();
  if (e < 0 || e >= g.edge_count())
    throw GraphError(ErrorCode::BadIndex, "edge id out of range");
  if (g.is_loop(e)) throw GraphError(ErrorCode::LoopEdge, "target edge is a loop");
  if (!is_connected(g)) throw GraphError(ErrorCode::Disconnected, "graph not connected");
  if (!find_bridges(g).empty())
    throw GraphError(ErrorCode::HasBridge, "bridgeless input required");
  if (!is_one_factor_plus(g, factor))
    throw GraphError(ErrorCode::NotOneFactorPlus, "factor must have minimum degree 1");

  Ctx cx;
  cx.opts = options;
  if (options.time_budget_ms > 0) {
    cx.has_deadline = true;
    cx.deadline = start + std::chrono::milliseconds(options.time_budget_ms);
  }
  std::optional<PerfectMatching> found;
  quelling_stream(cx, g, factor, e, 0, [&](const PerfectMatching& m) {
    found = m;
    return false;
  });
  if (!found) {
    if (!options.use_oracle)
      throw GraphError(ErrorCode::SearchBudgetExceeded,
                       "structural pipeline exhausted with the oracle disabled");
    throw GraphError(ErrorCode::TheoremViolation,
                     "no perfect matching through the edge quells the factor");
  }

  SolveReport report;
  QuellingCheck check = is_quelling_pair(g, factor, *found);
  report.certificate = *check.certificate;
  report.path = cx.path;
  report.oracle_used = cx.oracle_used;
  report.stats = cx.stats;
  report.stats.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

}  // namespace quell
