// Graph surgeries that shrink a cubic multigraph while preserving enough
// structure to pull perfect matchings back: splitting at 2-edge-cuts and
// cyclic 3-edge-cuts, deleting the endpoints of an edge (with two re-joining
// pairings), the chained double version of that deletion, and the inverse
// direction of expanding vertices into triangles.
//
// Every operation returns an explicit ReductionTrace; the matching lifts are
// pure functions of a trace plus child matchings, so any lift can be replayed
// and re-checked independently of the code that chose the reduction.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "quell/connectivity.hpp"
#include "quell/graph.hpp"
#include "quell/matchings.hpp"

namespace quell {

enum class ReductionKind {
  TwoCutSplit,
  ThreeCutSplit,
  AlphaBetaGammaDelta,
  DoubleReduction,
  TriangleExpansion,
};

const char* reduction_kind_name(ReductionKind kind);

// One child graph of a reduction, with its correspondence to the parent.
struct ReducedGraph {
  CubicGraph graph;
  // child vertex -> parent vertex; -1 for vertices the surgery invented
  // (apex vertices of a 3-cut split).  Triangle corners map to the vertex
  // they replaced.
  std::vector<VertexId> vertex_to_parent;
  // child edge -> parent edge; -1 for edges the surgery invented.  Injective
  // on mapped edges; every unmapped edge is one of the trace's special edges.
  std::vector<EdgeId> edge_to_parent;
  // Induced factor, for the operations that transform one (empty otherwise).
  OneFactorPlus factor;
};

struct ReductionTrace {
  ReductionKind kind;
  CubicGraph parent;
  std::vector<ReducedGraph> children;  // one or two, depending on kind

  // --- cut splits -----------------------------------------------------------
  // Parent crossing edges.  For ThreeCutSplit the order is normalized: when
  // the factor meets the cut in one edge, that edge comes first; the i-th cut
  // edge corresponds to the i-th entry of new_edges1/new_edges2.
  std::vector<EdgeId> cut;
  std::vector<EdgeId> new_edges1;  // child 0: the new edge, or the three pendants
  std::vector<EdgeId> new_edges2;  // child 1, likewise
  bool factor_meets_cut = false;   // 2-cut: cut inside factor; 3-cut: all three

  // --- edge reductions ------------------------------------------------------
  // Parent-side context of deleting the endpoints u,v of edge f: alpha/gamma
  // are u's other neighbours, beta/delta are v's, and the child gains the
  // edges alpha-beta and gamma-delta.
  VertexId u = -1, v = -1, alpha = -1, beta = -1, gamma = -1, delta = -1;
  EdgeId f = -1;
  EdgeId e_u_alpha = -1, e_u_gamma = -1, e_v_beta = -1, e_v_delta = -1;  // parent ids
  EdgeId new_alpha_beta = -1, new_gamma_delta = -1;                      // child ids

  // DoubleReduction only: the second deletion removes beta and y; w and x are
  // their factor-neighbours, z continues the circuit walk past y.  The child
  // gains alpha-x, w-z and keeps gamma-delta from the first step.
  VertexId y = -1, z = -1, w = -1, x = -1;
  EdgeId e_beta_y = -1, e_y_z = -1, e_w_beta = -1, e_x_y = -1;  // parent ids
  EdgeId new_alpha_x = -1, new_w_z = -1;                        // child ids
  // The two chained single-edge reductions (parent -> intermediate -> child),
  // used verbatim by lift_double and available for replay.
  std::vector<ReductionTrace> steps;

  // --- triangle expansion ---------------------------------------------------
  int parent_edge_count = 0;                         // child ids below this are parent edges
  std::vector<VertexId> expanded;                    // parent vertices turned into triangles
  std::vector<std::array<EdgeId, 3>> triangle_edges;  // child ids, aligned with `expanded`
};

// One-line human-readable description (stable field order), as printed by the
// command line tool's trace output.
std::string trace_summary(const ReductionTrace& t);

// ---- splitting at a 2-edge-cut --------------------------------------------
//
// Child 0 is built on cut.side1, child 1 on cut.side2; each side keeps its
// internal edges (in parent id order) and gains one new edge joining the two
// attachment vertices of the cut, appended last.  The factor must either
// contain the whole cut (children gain their new edge in the factor) or avoid
// it entirely with both cut edges on a single circuit of the factor's
// complement (children keep the restricted factor as is).
//
// Errors: NotA2Cut, FactorCaseViolated, NotOneFactorPlus, ChildHasBridge.
ReductionTrace two_cut_split(const CubicGraph& g, const EdgeCut& cut, const OneFactorPlus& factor);

// Reassembles a parent matching from child matchings: either both children
// match their new edge (the parent matching takes both cut edges instead) or
// neither does (plain union).  A disagreement cannot be assembled.
// `e_side` names the child carrying the caller's tracked edge (0 or 1); it is
// recorded by callers replaying a solve and must be in range.
// Errors: NotPerfectInChild, InconsistentCutParity.
PerfectMatching lift_two_cut(const ReductionTrace& t, const PerfectMatching& m1,
                             const PerfectMatching& m2, int e_side);

// ---- splitting at a cyclic 3-edge-cut -------------------------------------
//
// Each side gains an apex vertex (the last child vertex) joined to the three
// attachment vertices by pendant edges, appended last in the normalized cut
// order.  |factor ∩ cut| must be odd: for a singleton the children put only
// the corresponding first pendant into their factor, for the full cut all
// three pendants go in.
//
// Errors: NotACyclic3Cut, EvenIntersection, NotOneFactorPlus, ChildHasBridge.
ReductionTrace three_cut_split(const CubicGraph& g, const EdgeCut& cut,
                               const OneFactorPlus& factor);

// Both child matchings must match the pendant of the same index i (1-based);
// the parent matching replaces the two pendants by the i-th cut edge.
// Errors: NotPerfectInChild, PendantIndexMismatch.
PerfectMatching lift_three_cut(const ReductionTrace& t, const PerfectMatching& m1,
                               const PerfectMatching& m2, int pendant_index);

// ---- deleting the endpoints of an edge ------------------------------------
//
// For f = uv, deletes u and v with their five incident edges and joins u's
// other neighbours alpha, gamma to v's other neighbours beta, delta by two
// new edges alpha-beta and gamma-delta (appended last, in that order).
// Naming is deterministic: u is the smaller endpoint of f, alpha/gamma come
// from u's incident edges in id order, beta/delta from v's; cross_pairing
// swaps beta and delta, which yields the only other possible child.
//
// The four outer vertices must be distinct and different from u and v.
// Errors: DegenerateNeighbourhood, LoopEdge, BadIndex, ChildHasBridge.
ReductionTrace abgd_reduction(const CubicGraph& g, EdgeId f, bool cross_pairing = false);

// Induces a child factor through an AlphaBetaGammaDelta trace.  Two shapes
// are accepted:
//   - f and all four outer edges are in the factor: the child factor keeps
//     the rest and gains both new edges;
//   - f is outside the factor, exactly one of u-alpha/u-gamma and one of
//     v-beta/v-delta is inside, and the inside edges are paired with each
//     other: the child factor swaps that pair for its new edge.
// Anything else: FactorCaseViolated.
OneFactorPlus abgd_induce_factor(const ReductionTrace& t, const OneFactorPlus& factor);

// Pulls a child matching back: a matched new edge is replaced by the parallel
// pair of parent edges through u and v on the other pairing, a matching using
// neither new edge gains f itself.  Both new edges matched at once cannot be
// pulled back (u would be covered twice).
// Errors: NotPerfectInChild, ConflictingLift.
PerfectMatching lift_abgd(const ReductionTrace& t, const PerfectMatching& child_m);

// ---- the double reduction --------------------------------------------------
//
// For f = uv inside the factor whose endpoint v has both remaining edges
// v-beta, v-delta outside the factor: beta and delta lie on one odd circuit
// of the factor's complement, of length at least 5.  Walking that circuit
// past beta gives y and z; w and x are the factor-neighbours of beta and y.
// The reduction chains two endpoint deletions (first at f pairing alpha-beta
// and gamma-delta, then at beta-y pairing alpha-x and w-z) and ends on a
// child with new edges gamma-delta, alpha-x, w-z; the child may contain
// parallel edges and loops, and is rejected if it has a bridge.
//
// alpha_edge selects u (the f-endpoint it touches) and alpha; beta_edge
// selects beta among v's two non-factor edges.
// Errors: ConfigurationMismatch, ChildHasBridge, NotOneFactorPlus, BadIndex.
ReductionTrace double_reduction(const CubicGraph& g, EdgeId f, const OneFactorPlus& factor,
                                EdgeId alpha_edge, EdgeId beta_edge);

// Chains the two single-step lifts.  The result contains one of the parent
// edges v-beta, beta-y, y-z, so it always hits the odd circuit the
// configuration was built on.
// Errors: NotPerfectInChild, ConflictingLift.
PerfectMatching lift_double(const ReductionTrace& t, const PerfectMatching& child_m);

// ---- vertex-to-triangle expansion -----------------------------------------
//
// Every vertex not on one of the given pairwise disjoint circuits is expanded
// into a triangle: each of its three edge ends gets its own corner vertex,
// and the three corners are joined pairwise.  Parent edges keep their ids
// (0..m-1) in the child; triangle edges are appended, three per expanded
// vertex.  The circuits plus the new triangles form a 2-factor of the child.
// Errors: CircuitsNotDisjoint, PreconditionViolated (malformed circuit).
ReductionTrace expand_to_triangles(const CubicGraph& g, const CircuitSet& circuits);

// Drops the triangle-internal edges of a child matching; what remains is a
// perfect matching of the parent whenever each triangle absorbed exactly one
// matched internal edge.  A child matching that takes all three outer edges
// of some triangle projects onto a triple cover of that vertex and is
// rejected.  Errors: NotPerfectInChild, PreconditionViolated.
PerfectMatching project_from_expansion(const ReductionTrace& t, const PerfectMatching& child_m);

}  // namespace quell
