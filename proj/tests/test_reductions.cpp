#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "doctest.h"
#include "quell/connectivity.hpp"
#include "quell/graph.hpp"
#include "quell/matchings.hpp"
#include "quell/reductions.hpp"
#include "support/named_graphs.hpp"
#include "support/oracles.hpp"

using namespace quell;
using namespace quell::testing;

namespace {

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GraphError& e) {
    return e.code();
  }
  return std::nullopt;
}

// Rebuilds a full EdgeCut from a crossing set by flooding the two sides.
EdgeCut cut_from_crossing(const CubicGraph& g, const std::vector<EdgeId>& crossing) {
  std::vector<int> comp(g.vertex_count(), -1);
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (comp[s] != -1) continue;
    int label = (s == 0) ? 0 : 1;
    std::vector<VertexId> stack{s};
    comp[s] = label;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (EdgeId e : g.incident(v)) {
        if (std::find(crossing.begin(), crossing.end(), e) != crossing.end()) continue;
        VertexId w = g.other_end(e, v);
        if (comp[w] == -1) {
          comp[w] = label;
          stack.push_back(w);
        }
      }
    }
  }
  EdgeCut cut;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    (comp[v] == 0 ? cut.side1 : cut.side2).push_back(v);
  cut.crossing = sorted_unique(crossing);
  return cut;
}

CubicGraph loop_pair() {
  return CubicGraph(2, {{0, 0}, {0, 1}, {1, 1}}, true);
}

}  // namespace

TEST_CASE("splitting a 4-vertex multigraph at its 2-edge-cut") {
  CubicGraph g = domino();
  EdgeCut cut = cut_from_crossing(g, {2, 3});

  SUBCASE("factor containing the cut seeds both children with their new edge") {
    ReductionTrace t = two_cut_split(g, cut, {2, 3});
    CHECK(t.kind == ReductionKind::TwoCutSplit);
    CHECK(t.cut == std::vector<EdgeId>{2, 3});
    CHECK(t.factor_meets_cut);
    REQUIRE(t.children.size() == 2);
    const ReducedGraph& a = t.children[0];
    const ReducedGraph& b = t.children[1];
    CHECK(a.graph.vertex_count() == 2);
    CHECK(a.graph.edge_count() == 3);
    CHECK(a.vertex_to_parent == std::vector<VertexId>{0, 1});
    CHECK(a.edge_to_parent == std::vector<EdgeId>{0, 1, -1});
    CHECK(a.factor == EdgeSet{2});
    CHECK(b.graph.vertex_count() == 2);
    CHECK(b.vertex_to_parent == std::vector<VertexId>{2, 3});
    CHECK(b.edge_to_parent == std::vector<EdgeId>{4, 5, -1});
    CHECK(b.factor == EdgeSet{2});
    CHECK(t.new_edges1 == std::vector<EdgeId>{2});
    CHECK(t.new_edges2 == std::vector<EdgeId>{2});
    CHECK(trace_summary(t) == "TwoCutSplit cut=[2,3] children=2v+2v new=2|2 factor_cut=yes");
  }

  SUBCASE("factor avoiding the cut keeps its restriction on each side") {
    ReductionTrace t = two_cut_split(g, cut, {0, 4});
    CHECK_FALSE(t.factor_meets_cut);
    CHECK(t.children[0].factor == EdgeSet{0});
    CHECK(t.children[1].factor == EdgeSet{0});
  }

  SUBCASE("lifting reproduces exactly the parent matchings") {
    ReductionTrace t = two_cut_split(g, cut, {2, 3});
    std::vector<PerfectMatching> pa = all_perfect_matchings(t.children[0].graph);
    std::vector<PerfectMatching> pb = all_perfect_matchings(t.children[1].graph);
    REQUIRE(pa.size() == 3);
    REQUIRE(pb.size() == 3);
    std::set<PerfectMatching> lifted;
    int rejected = 0;
    for (const PerfectMatching& m1 : pa)
      for (const PerfectMatching& m2 : pb) {
        bool in1 = contains(m1, t.new_edges1[0]);
        bool in2 = contains(m2, t.new_edges2[0]);
        if (in1 != in2) {
          CHECK(code_of([&] { lift_two_cut(t, m1, m2, 0); }) == ErrorCode::InconsistentCutParity);
          ++rejected;
          continue;
        }
        PerfectMatching m = lift_two_cut(t, m1, m2, 0);
        CHECK(is_perfect_matching(g, m));
        CHECK(lift_two_cut(t, m1, m2, 1) == m);
        if (in1) {
          CHECK(contains(m, 2));
          CHECK(contains(m, 3));
        }
        lifted.insert(m);
      }
    CHECK(rejected == 4);
    std::vector<PerfectMatching> all = all_perfect_matchings(g);
    CHECK(lifted == std::set<PerfectMatching>(all.begin(), all.end()));
  }

  SUBCASE("rejections") {
    CHECK(code_of([&] { two_cut_split(g, cut, {0, 2, 4}); }) == ErrorCode::FactorCaseViolated);
    CHECK(code_of([&] { two_cut_split(g, cut, {0, 1, 4, 5}); }) == ErrorCode::FactorCaseViolated);
    CHECK(code_of([&] { two_cut_split(g, cut, {2}); }) == ErrorCode::NotOneFactorPlus);
    EdgeCut bad = cut_from_crossing(g, {0, 1});  // both sides collapse to one
    bad.side1 = {0};
    bad.side2 = {1, 2, 3};
    bad.crossing = {0, 1, 2};
    CHECK(code_of([&] { two_cut_split(g, bad, {2, 3}); }) == ErrorCode::NotA2Cut);
    bad.crossing = {0, 1};
    CHECK(code_of([&] { two_cut_split(g, bad, {2, 3}); }) == ErrorCode::NotA2Cut);
    ReductionTrace t = two_cut_split(g, cut, {2, 3});
    CHECK(code_of([&] { lift_two_cut(t, {0}, {0}, 2); }) == ErrorCode::BadIndex);
    CHECK(code_of([&] { lift_two_cut(t, {0, 1}, {0}, 0); }) == ErrorCode::NotPerfectInChild);
  }
}

TEST_CASE("a 2-cut side that hangs off a bridge is rejected as a child") {
  CubicGraph g = dumbbell();
  EdgeCut cut = cut_from_crossing(g, {2, 3});
  CHECK(code_of([&] { two_cut_split(g, cut, {2, 3, 5, 8}); }) == ErrorCode::ChildHasBridge);
}

TEST_CASE("splitting the prism at its cyclic 3-edge-cut") {
  CubicGraph g = prism();
  EdgeCut cut = cut_from_crossing(g, {2, 4, 5});

  SUBCASE("singleton factor intersection puts the factor edge first") {
    ReductionTrace t = three_cut_split(g, cut, {0, 5, 6});
    CHECK(t.cut == std::vector<EdgeId>{5, 2, 4});
    CHECK_FALSE(t.factor_meets_cut);
    REQUIRE(t.children.size() == 2);
    const ReducedGraph& a = t.children[0];
    CHECK(a.graph.vertex_count() == 4);
    CHECK(a.graph.edge_count() == 6);
    CHECK(a.vertex_to_parent == std::vector<VertexId>{0, 1, 2, -1});
    CHECK(a.edge_to_parent == std::vector<EdgeId>{0, 1, 3, -1, -1, -1});
    CHECK(t.new_edges1 == std::vector<EdgeId>{3, 4, 5});
    CHECK(a.factor == EdgeSet{0, 3});
    const ReducedGraph& b = t.children[1];
    CHECK(b.vertex_to_parent == std::vector<VertexId>{3, 4, 5, -1});
    CHECK(b.factor == EdgeSet{0, 3});
    CHECK(trace_summary(t) ==
          "ThreeCutSplit cut=[5,2,4] children=4v+4v pendants=[3,4,5]|[3,4,5] factor_cut=one");
  }

  SUBCASE("full factor intersection puts all pendants into the child factors") {
    ReductionTrace t = three_cut_split(g, cut, {2, 4, 5});
    CHECK(t.cut == std::vector<EdgeId>{2, 4, 5});
    CHECK(t.factor_meets_cut);
    CHECK(t.children[0].factor == EdgeSet{3, 4, 5});
    CHECK(t.children[1].factor == EdgeSet{3, 4, 5});
  }

  SUBCASE("lifting over compatible pendant choices yields parent matchings") {
    for (const OneFactorPlus& f : {OneFactorPlus{0, 5, 6}, OneFactorPlus{2, 4, 5}}) {
      ReductionTrace t = three_cut_split(g, cut, f);
      std::vector<PerfectMatching> pa = all_perfect_matchings(t.children[0].graph);
      std::vector<PerfectMatching> pb = all_perfect_matchings(t.children[1].graph);
      REQUIRE(pa.size() == 3);
      REQUIRE(pb.size() == 3);
      std::set<PerfectMatching> lifted;
      for (const PerfectMatching& m1 : pa)
        for (const PerfectMatching& m2 : pb)
          for (int i = 1; i <= 3; ++i) {
            bool ok1 = contains(m1, t.new_edges1[i - 1]);
            bool ok2 = contains(m2, t.new_edges2[i - 1]);
            if (!ok1 || !ok2) {
              CHECK(code_of([&] { lift_three_cut(t, m1, m2, i); }) ==
                    ErrorCode::PendantIndexMismatch);
              continue;
            }
            PerfectMatching m = lift_three_cut(t, m1, m2, i);
            CHECK(is_perfect_matching(g, m));
            CHECK(contains(m, t.cut[i - 1]));
            lifted.insert(m);
          }
    CHECK(lifted == std::set<PerfectMatching>{{0, 5, 6}, {1, 4, 7}, {2, 3, 8}});
    }
  }

  SUBCASE("rejections") {
    CHECK(code_of([&] { three_cut_split(g, cut, {0, 3, 6, 8}); }) == ErrorCode::EvenIntersection);
    CHECK(code_of([&] { three_cut_split(g, cut, {0, 2, 3, 4, 7, 8}); }) ==
          ErrorCode::EvenIntersection);
    CHECK(code_of([&] { three_cut_split(g, cut, {}); }) == ErrorCode::NotOneFactorPlus);
    EdgeCut star;
    star.side1 = {0};
    star.side2 = {1, 2, 3, 4, 5};
    star.crossing = {0, 1, 2};
    CHECK(code_of([&] { three_cut_split(g, star, {2, 4, 5}); }) == ErrorCode::NotACyclic3Cut);
    ReductionTrace t = three_cut_split(g, cut, {2, 4, 5});
    CHECK(code_of([&] { lift_three_cut(t, {0, 5}, {0, 5}, 0); }) == ErrorCode::BadIndex);
    CHECK(code_of([&] { lift_three_cut(t, {0}, {0, 5}, 1); }) == ErrorCode::NotPerfectInChild);
  }
}

TEST_CASE("deleting the endpoints of a prism edge") {
  CubicGraph g = prism();
  ReductionTrace t = abgd_reduction(g, 2);
  CHECK(t.u == 0);
  CHECK(t.v == 3);
  CHECK(t.alpha == 1);
  CHECK(t.gamma == 2);
  CHECK(t.beta == 4);
  CHECK(t.delta == 5);
  CHECK(t.e_u_alpha == 0);
  CHECK(t.e_u_gamma == 1);
  CHECK(t.e_v_beta == 6);
  CHECK(t.e_v_delta == 7);
  const ReducedGraph& c = t.children[0];
  CHECK(c.graph.vertex_count() == 4);
  CHECK(c.graph.edge_count() == 6);
  CHECK(c.vertex_to_parent == std::vector<VertexId>{1, 2, 4, 5});
  CHECK(c.edge_to_parent == std::vector<EdgeId>{3, 4, 5, 8, -1, -1});
  CHECK(t.new_alpha_beta == 4);
  CHECK(t.new_gamma_delta == 5);
  CHECK(trace_summary(t) == "AlphaBetaGammaDelta f=2 u=0 v=3 outer=[1,4,2,5] new=[4,5]");

  SUBCASE("the four lift shapes") {
    CHECK(lift_abgd(t, {0, 3}) == PerfectMatching{2, 3, 8});
    CHECK(lift_abgd(t, {1, 2}) == PerfectMatching{2, 4, 5});
    CHECK(lift_abgd(t, {1, 5}) == PerfectMatching{1, 4, 7});
    CHECK(lift_abgd(t, {2, 4}) == PerfectMatching{0, 5, 6});
    CHECK(code_of([&] { lift_abgd(t, {4, 5}); }) == ErrorCode::ConflictingLift);
    CHECK(code_of([&] { lift_abgd(t, {0, 1}); }) == ErrorCode::NotPerfectInChild);
  }

  SUBCASE("factor transfer in both accepted shapes") {
    CHECK(abgd_induce_factor(t, {0, 1, 2, 6, 7}) == OneFactorPlus{4, 5});
    CHECK(abgd_induce_factor(t, {0, 5, 6}) == OneFactorPlus{2, 4});
    CHECK(abgd_induce_factor(t, {1, 3, 7, 8}) == OneFactorPlus{0, 3, 5});
    CHECK(code_of([&] { abgd_induce_factor(t, {0, 5, 7, 8}); }) == ErrorCode::FactorCaseViolated);
    CHECK(code_of([&] { abgd_induce_factor(t, {0, 1, 2, 6, 8}); }) ==
          ErrorCode::FactorCaseViolated);
    CHECK(code_of([&] { abgd_induce_factor(t, {2}); }) == ErrorCode::NotOneFactorPlus);
  }

  SUBCASE("degenerate neighbourhoods are rejected") {
    CHECK(code_of([&] { abgd_reduction(g, 0); }) == ErrorCode::DegenerateNeighbourhood);
    CHECK(code_of([&] { abgd_reduction(g, 0, true); }) == ErrorCode::DegenerateNeighbourhood);
    CubicGraph k = k4();
    for (EdgeId f = 0; f < k.edge_count(); ++f) {
      CHECK(code_of([&] { abgd_reduction(k, f); }) == ErrorCode::DegenerateNeighbourhood);
      CHECK(code_of([&] { abgd_reduction(k, f, true); }) == ErrorCode::DegenerateNeighbourhood);
    }
    CHECK(code_of([&] { abgd_reduction(theta(), 0); }) == ErrorCode::DegenerateNeighbourhood);
    CHECK(code_of([&] { abgd_reduction(g, 99); }) == ErrorCode::BadIndex);
    CHECK(code_of([&] { abgd_reduction(loop_pair(), 0); }) == ErrorCode::LoopEdge);
  }
}

TEST_CASE("endpoint deletion lift contracts hold on every child matching") {
  for (const CubicGraph& g : {prism(), k33(), petersen(), moebius_kantor(), domino()}) {
    std::vector<PerfectMatching> parent_pms = all_perfect_matchings(g);
    std::set<PerfectMatching> parent_set(parent_pms.begin(), parent_pms.end());
    for (EdgeId f = 0; f < g.edge_count(); ++f) {
      if (g.is_loop(f)) continue;
      for (bool cross : {false, true}) {
        ReductionTrace t;
        try {
          t = abgd_reduction(g, f, cross);
        } catch (const GraphError& e) {
          bool expected = e.code() == ErrorCode::DegenerateNeighbourhood ||
                          e.code() == ErrorCode::ChildHasBridge;
          CHECK(expected);
          continue;
        }
        const CubicGraph& child = t.children[0].graph;
        CHECK(child.vertex_count() == g.vertex_count() - 2);
        CHECK(child.edge_count() == g.edge_count() - 3);
        CHECK(find_bridges(child).empty());
        for_each_perfect_matching(child, [&](const PerfectMatching& cm) {
          bool ab = contains(cm, t.new_alpha_beta);
          bool gd = contains(cm, t.new_gamma_delta);
          if (ab && gd) {
            CHECK(code_of([&] { lift_abgd(t, cm); }) == ErrorCode::ConflictingLift);
            return true;
          }
          PerfectMatching m = lift_abgd(t, cm);
          CHECK(parent_set.count(m) == 1);
          if (ab) {
            CHECK(contains(m, t.e_u_alpha));
            CHECK(contains(m, t.e_v_beta));
          } else if (gd) {
            CHECK(contains(m, t.e_u_gamma));
            CHECK(contains(m, t.e_v_delta));
          } else {
            CHECK(contains(m, t.f));
          }
          return true;
        });
      }
    }
  }
}

TEST_CASE("the chained double deletion on the Petersen graph") {
  CubicGraph g = petersen();
  OneFactorPlus spokes{2, 4, 6, 8, 9};
  ReductionTrace t = double_reduction(g, 2, spokes, 0, 10);
  CHECK(t.u == 0);
  CHECK(t.v == 5);
  CHECK(t.alpha == 1);
  CHECK(t.beta == 7);
  CHECK(t.gamma == 4);
  CHECK(t.delta == 8);
  CHECK(t.y == 9);
  CHECK(t.z == 6);
  CHECK(t.w == 2);
  CHECK(t.x == 4);
  CHECK(t.e_beta_y == 14);
  CHECK(t.e_y_z == 13);
  CHECK(t.e_w_beta == 6);
  CHECK(t.e_x_y == 9);
  REQUIRE(t.children.size() == 1);
  REQUIRE(t.steps.size() == 2);
  const ReducedGraph& c = t.children[0];
  CHECK(c.graph.vertex_count() == 6);
  CHECK(c.graph.edge_count() == 9);
  CHECK(c.vertex_to_parent == std::vector<VertexId>{1, 2, 3, 4, 6, 8});
  CHECK(c.edge_to_parent == std::vector<EdgeId>{3, 4, 5, 7, 8, 12, -1, -1, -1});
  CHECK(t.new_gamma_delta == 6);
  CHECK(t.new_alpha_x == 7);
  CHECK(t.new_w_z == 8);
  CHECK(c.factor == OneFactorPlus{1, 4, 6, 7, 8});
  CHECK(is_one_factor_plus(c.graph, c.factor));
  CHECK(trace_summary(t) == "DoubleReduction f=2 u=0 v=5 beta=7 y=9 new=[6,7,8]");

  SUBCASE("lifted matchings are perfect and hit the circuit the walk used") {
    std::vector<PerfectMatching> pms = all_perfect_matchings(c.graph);
    REQUIRE(pms.size() == 4);
    int conflicts = 0, lifted = 0;
    for (const PerfectMatching& cm : pms) {
      if (contains(cm, t.new_alpha_x) && contains(cm, t.new_w_z)) {
        CHECK(code_of([&] { lift_double(t, cm); }) == ErrorCode::ConflictingLift);
        ++conflicts;
        continue;
      }
      PerfectMatching m = lift_double(t, cm);
      CHECK(is_perfect_matching(g, m));
      bool hits = contains(m, t.e_v_beta) || contains(m, t.e_beta_y) || contains(m, t.e_y_z);
      CHECK(hits);
      ++lifted;
    }
    CHECK(conflicts == 1);
    CHECK(lifted == 3);
  }

  SUBCASE("specific lifts") {
    CHECK(lift_double(t, {0, 3, 5}) == PerfectMatching{2, 3, 7, 12, 14});
    CHECK(lift_double(t, {1, 2, 6}) == PerfectMatching{1, 4, 5, 11, 14});
    CHECK(lift_double(t, {2, 5, 7}) == PerfectMatching{0, 5, 9, 10, 12});
  }
}

TEST_CASE("double deletion applies at every configuration of the Petersen spokes") {
  CubicGraph g = petersen();
  OneFactorPlus spokes{2, 4, 6, 8, 9};
  int built = 0, bridged = 0;
  for (EdgeId f : spokes) {
    for (VertexId u : {g.edge(f).u, g.edge(f).v}) {
      VertexId v = g.other_end(f, u);
      std::vector<EdgeId> at_u, at_v;
      for (EdgeId e : g.incident(u))
        if (e != f) at_u.push_back(e);
      for (EdgeId e : g.incident(v))
        if (e != f) at_v.push_back(e);
      for (EdgeId ae : at_u)
        for (EdgeId be : at_v) {
          ReductionTrace t;
          try {
            t = double_reduction(g, f, spokes, ae, be);
          } catch (const GraphError& e) {
            // choosing alpha equal to the walk's contact x makes the new
            // alpha-x edge a loop, whose companion edge is then a bridge
            CHECK(e.code() == ErrorCode::ChildHasBridge);
            ++bridged;
            continue;
          }
          CHECK(t.children[0].graph.vertex_count() == 6);
          CHECK(find_bridges(t.children[0].graph).empty());
          CHECK(is_one_factor_plus(t.children[0].graph, t.children[0].factor));
          for_each_perfect_matching(t.children[0].graph, [&](const PerfectMatching& cm) {
            try {
              PerfectMatching m = lift_double(t, cm);
              CHECK(is_perfect_matching(g, m));
              bool hits =
                  contains(m, t.e_v_beta) || contains(m, t.e_beta_y) || contains(m, t.e_y_z);
              CHECK(hits);
            } catch (const GraphError& e) {
              CHECK(e.code() == ErrorCode::ConflictingLift);
            }
            return true;
          });
          ++built;
        }
    }
  }
  CHECK(built == 20);
  CHECK(bridged == 20);
}

TEST_CASE("double deletion rejects broken configurations") {
  CubicGraph g = petersen();
  OneFactorPlus spokes{2, 4, 6, 8, 9};
  CHECK(code_of([&] { double_reduction(g, 0, spokes, 2, 10); }) ==
        ErrorCode::ConfigurationMismatch);  // f outside the factor
  CHECK(code_of([&] { double_reduction(g, 2, spokes, 0, 9); }) ==
        ErrorCode::ConfigurationMismatch);  // beta edge misses v
  CHECK(code_of([&] { double_reduction(g, 2, spokes, 3, 10); }) ==
        ErrorCode::ConfigurationMismatch);  // alpha edge misses f entirely
  OneFactorPlus with_vb{2, 4, 6, 8, 9, 11};
  CHECK(code_of([&] { double_reduction(g, 2, with_vb, 0, 10); }) ==
        ErrorCode::ConfigurationMismatch);  // v keeps a factor edge besides f
  CHECK(code_of([&] { double_reduction(g, 2, spokes, 0, 99); }) == ErrorCode::BadIndex);
  CHECK(code_of([&] { double_reduction(g, 2, {}, 0, 10); }) == ErrorCode::NotOneFactorPlus);
  // A triangle complement folds the five-vertex walk back onto v.
  CHECK(code_of([&] { double_reduction(prism(), 2, {2, 4, 5}, 0, 6); }) ==
        ErrorCode::ConfigurationMismatch);
}

TEST_CASE("expanding every vertex of the Petersen graph into a triangle") {
  CubicGraph g = petersen();
  ReductionTrace t = expand_to_triangles(g, {});
  const ReducedGraph& c = t.children[0];
  CHECK(c.graph.vertex_count() == 30);
  CHECK(c.graph.edge_count() == 45);
  CHECK(c.graph.is_simple());
  CHECK(t.parent_edge_count == 15);
  CHECK(t.expanded.size() == 10);
  CHECK(t.triangle_edges.size() == 10);
  for (EdgeId e = 0; e < 15; ++e) CHECK(c.edge_to_parent[e] == e);
  CHECK(find_bridges(c.graph).empty());
  CHECK(trace_summary(t) == "TriangleExpansion expanded=10 child=30v45e");

  SUBCASE("the untouched parent edges form a perfect matching of the expansion") {
    PerfectMatching n;
    for (EdgeId e = 0; e < 15; ++e) n.push_back(e);
    CHECK(is_perfect_matching(c.graph, n));
    CHECK(code_of([&] { project_from_expansion(t, n); }) == ErrorCode::PreconditionViolated);
  }

  SUBCASE("the expansion has 64 perfect matchings and cyclic connectivity 3") {
    CHECK(count_perfect_matchings(c.graph) == 64);
    CyclicConnectivity cc = cyclic_edge_connectivity(c.graph);
    CHECK(cc.value == 3);
  }

  SUBCASE("a parent matching plus opposite triangle edges projects back") {
    PerfectMatching spokes{2, 4, 6, 8, 9};
    PerfectMatching cm = spokes;
    for (size_t i = 0; i < t.expanded.size(); ++i) {
      VertexId v = t.expanded[i];
      const std::vector<EdgeId>& inc = g.incident(v);
      int slot = -1;
      for (int s = 0; s < 3; ++s)
        if (contains(spokes, inc[s])) slot = s;
      REQUIRE(slot >= 0);
      // triangle edge list per vertex is (c0c1, c0c2, c1c2); the edge avoiding
      // the matched corner `slot` sits at index 2 - slot
      cm.push_back(t.triangle_edges[i][2 - slot]);
    }
    cm = sorted_unique(cm);
    CHECK(is_perfect_matching(c.graph, cm));
    CHECK(project_from_expansion(t, cm) == spokes);
  }

  SUBCASE("every child matching projects or is rejected, never mangled") {
    int projected = 0, rejected = 0;
    for_each_perfect_matching(c.graph, [&](const PerfectMatching& cm) {
      try {
        PerfectMatching m = project_from_expansion(t, cm);
        CHECK(is_perfect_matching(g, m));
        ++projected;
      } catch (const GraphError& e) {
        CHECK(e.code() == ErrorCode::PreconditionViolated);
        ++rejected;
      }
      return true;
    });
    CHECK(projected + rejected == 64);
    CHECK(projected > 0);
    CHECK(rejected > 0);
  }
}

TEST_CASE("expansion keeps listed circuits and loops behave") {
  CubicGraph g = petersen();
  PerfectMatching spokes{2, 4, 6, 8, 9};
  ComplementComponents comp = complement_components(g, spokes);
  REQUIRE(comp.circuits.size() == 2);

  SUBCASE("keeping a full 2-factor reproduces the graph") {
    ReductionTrace t = expand_to_triangles(g, comp.circuits);
    CHECK(t.children[0].graph.vertex_count() == 10);
    CHECK(t.children[0].graph.edge_count() == 15);
    CHECK(t.expanded.empty());
    PerfectMatching m = project_from_expansion(t, spokes);
    CHECK(m == spokes);
  }

  SUBCASE("keeping one circuit expands only the other") {
    ReductionTrace t = expand_to_triangles(g, {comp.circuits[0]});
    CHECK(t.children[0].graph.vertex_count() == 5 + 15);
    CHECK(t.children[0].graph.edge_count() == 15 + 15);
    CHECK(t.expanded.size() == 5);
  }

  SUBCASE("overlapping or malformed circuits are rejected") {
    CHECK(code_of([&] {
      expand_to_triangles(g, {comp.circuits[0], comp.circuits[0]});
    }) == ErrorCode::CircuitsNotDisjoint);
    Circuit broken;
    broken.vertices = {0, 1};
    broken.edges = {0};
    CHECK(code_of([&] { expand_to_triangles(g, {broken}); }) == ErrorCode::PreconditionViolated);
    broken.edges = {0, 3};
    CHECK(code_of([&] { expand_to_triangles(g, {broken}); }) == ErrorCode::PreconditionViolated);
  }

  SUBCASE("loops expand into ordinary edges") {
    CubicGraph lp = loop_pair();
    ReductionTrace t = expand_to_triangles(lp, {});
    CHECK(t.children[0].graph.vertex_count() == 6);
    CHECK(t.children[0].graph.edge_count() == 9);
    CHECK_FALSE(t.children[0].graph.has_loop());
    CHECK(is_perfect_matching(t.children[0].graph, {0, 1, 2}));
    CHECK(code_of([&] { project_from_expansion(t, {0, 1, 2}); }) ==
          ErrorCode::PreconditionViolated);
    CHECK(project_from_expansion(t, {1, 3, 8}) == PerfectMatching{1});
  }
}
