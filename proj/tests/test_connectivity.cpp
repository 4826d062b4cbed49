#include <functional>
#include <vector>

#include "doctest.h"
#include "quell/connectivity.hpp"
#include "support/named_graphs.hpp"
#include "support/oracles.hpp"

using namespace quell;
using namespace quell::testing;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GraphError& err) {
    return err.code();
  }
  FAIL("expected a GraphError");
  return ErrorCode::TheoremViolation;
}

// Two triple edges side by side: the smallest disconnected cubic multigraph.
CubicGraph two_thetas() {
  return CubicGraph(4, {{0, 1}, {0, 1}, {0, 1}, {2, 3}, {2, 3}, {2, 3}});
}

// A loop at each end of a single edge: that edge is a bridge.
CubicGraph loop_pair() {
  return CubicGraph(2, {{0, 0}, {0, 1}, {1, 1}}, /*allow_loops=*/true);
}

void check_cut_shape(const CubicGraph& g, const EdgeCut& cut) {
  REQUIRE(!cut.side1.empty());
  REQUIRE(!cut.side2.empty());
  CHECK(cut.side1.front() == 0);  // side1 always holds vertex 0
  CHECK(static_cast<int>(cut.side1.size() + cut.side2.size()) == g.vertex_count());
  CHECK(std::is_sorted(cut.side1.begin(), cut.side1.end()));
  CHECK(std::is_sorted(cut.side2.begin(), cut.side2.end()));
  CHECK(std::is_sorted(cut.crossing.begin(), cut.crossing.end()));
  // The crossing set must be exactly the edges with one endpoint per side.
  std::vector<char> in1(g.vertex_count(), 0);
  for (VertexId v : cut.side1) in1[v] = 1;
  std::vector<EdgeId> expect;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (in1[g.edge(e).u] != in1[g.edge(e).v]) expect.push_back(e);
  CHECK(cut.crossing == expect);
}

}  // namespace

TEST_CASE("component labels and connectivity") {
  CHECK(is_connected(petersen()));
  CHECK(is_connected(theta()));
  CHECK(!is_connected(two_thetas()));
  std::vector<int> label = component_labels(two_thetas());
  CHECK(label == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("bridges") {
  CHECK(find_bridges(k4()).empty());
  CHECK(find_bridges(petersen()).empty());
  // Parallel edges protect each other: neither copy is a bridge.
  CHECK(find_bridges(theta()).empty());
  CHECK(find_bridges(domino()).empty());
  CHECK(find_bridges(dumbbell()) == std::vector<EdgeId>{4});
  CHECK(find_bridges(loop_pair()) == std::vector<EdgeId>{1});  // loops never count
  CHECK(find_bridges(two_thetas()).empty());
}

TEST_CASE("2-edge-cuts") {
  auto cut = find_2_edge_cut(domino());
  REQUIRE(cut.has_value());
  check_cut_shape(domino(), *cut);
  CHECK(cut->crossing == std::vector<EdgeId>{2, 3});
  CHECK(cut->side1 == std::vector<VertexId>{0, 1});
  CHECK(cut->side2 == std::vector<VertexId>{2, 3});
  CHECK(cut->cyclic);  // a parallel pair on each side is a circuit

  CHECK(!find_2_edge_cut(k4()).has_value());
  CHECK(!find_2_edge_cut(k33()).has_value());
  CHECK(!find_2_edge_cut(prism()).has_value());
  CHECK(!find_2_edge_cut(petersen()).has_value());
  CHECK(!find_2_edge_cut(theta()).has_value());

  CHECK(code_of([] { find_2_edge_cut(two_thetas()); }) == ErrorCode::Disconnected);
  CHECK(code_of([] { find_2_edge_cut(dumbbell()); }) == ErrorCode::HasBridge);
  CHECK(code_of([] { find_2_edge_cut(loop_pair()); }) == ErrorCode::HasBridge);
}

TEST_CASE("2-edge-cuts agree with the bipartition sweep") {
  for (const CubicGraph& g : {domino(), k4(), prism(), petersen(), flower_j5()}) {
    auto cut = find_2_edge_cut(g);
    auto all = oracle_all_2cuts(g);
    if (all.empty()) {
      CHECK(!cut.has_value());
    } else {
      REQUIRE(cut.has_value());
      CHECK(cut->crossing == all.front());  // least cut is returned
    }
  }
}

TEST_CASE("cyclic 3-edge-cuts") {
  auto cut = find_cyclic_3_edge_cut(prism());
  REQUIRE(cut.has_value());
  check_cut_shape(prism(), *cut);
  CHECK(cut->crossing == std::vector<EdgeId>{2, 4, 5});
  CHECK(cut->side1 == std::vector<VertexId>{0, 1, 2});
  CHECK(cut->side2 == std::vector<VertexId>{3, 4, 5});
  CHECK(cut->cyclic);

  CHECK(!find_cyclic_3_edge_cut(k4()).has_value());
  CHECK(!find_cyclic_3_edge_cut(k33()).has_value());
  CHECK(!find_cyclic_3_edge_cut(petersen()).has_value());

  // Vertex cuts (the three edges at one vertex) must not be reported.
  CubicGraph mk = moebius_kantor();
  auto mk_cut = find_cyclic_3_edge_cut(mk);
  CHECK(!mk_cut.has_value());

  CHECK(code_of([] { find_cyclic_3_edge_cut(domino()); }) == ErrorCode::PreconditionViolated);
  CHECK(code_of([] { find_cyclic_3_edge_cut(dumbbell()); }) == ErrorCode::HasBridge);
  CHECK(code_of([] { find_cyclic_3_edge_cut(two_thetas()); }) == ErrorCode::Disconnected);
}

TEST_CASE("cyclic 3-edge-cuts agree with the bipartition sweep") {
  for (const CubicGraph& g : {prism(), k4(), k33(), petersen(), flower_j5()}) {
    auto all = oracle_all_cyclic_3cuts(g);
    if (find_2_edge_cut(g).has_value()) continue;
    auto cut = find_cyclic_3_edge_cut(g);
    if (all.empty()) {
      CHECK(!cut.has_value());
    } else {
      REQUIRE(cut.has_value());
      CHECK(cut->crossing == all.front());
    }
  }
}

TEST_CASE("cyclic edge-connectivity of the named graphs") {
  auto cec = [](const CubicGraph& g) { return cyclic_edge_connectivity(g); };

  CyclicConnectivity theta_c = cec(theta());
  CHECK(theta_c.value == 2);
  CHECK(!theta_c.witness.has_value());  // no cut has circuits on both sides

  CyclicConnectivity k4_c = cec(k4());
  CHECK(k4_c.value == 3);
  CHECK(!k4_c.witness.has_value());

  CyclicConnectivity k33_c = cec(k33());
  CHECK(k33_c.value == 4);
  CHECK(!k33_c.witness.has_value());

  CyclicConnectivity dom = cec(domino());
  CHECK(dom.value == 2);
  REQUIRE(dom.witness.has_value());
  CHECK(dom.witness->crossing == std::vector<EdgeId>{2, 3});

  CyclicConnectivity pri = cec(prism());
  CHECK(pri.value == 3);
  REQUIRE(pri.witness.has_value());
  CHECK(pri.witness->crossing == std::vector<EdgeId>{2, 4, 5});
  check_cut_shape(prism(), *pri.witness);

  CyclicConnectivity pet = cec(petersen());
  CHECK(pet.value == 5);
  REQUIRE(pet.witness.has_value());
  CHECK(pet.witness->crossing.size() == 5);
  check_cut_shape(petersen(), *pet.witness);
  CHECK(pet.witness->cyclic);
}

TEST_CASE("cyclic edge-connectivity agrees with the bipartition sweep") {
  for (const CubicGraph& g :
       {theta(), k4(), k33(), domino(), prism(), dumbbell(), petersen(), moebius_kantor()}) {
    CAPTURE(g.vertex_count());
    CHECK(cyclic_edge_connectivity(g).value == oracle_cyclic_cut_value(g));
  }
}
