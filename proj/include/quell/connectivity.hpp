// Connectivity structure of cubic multigraphs: bridges, small edge cuts, and
// cyclic edge-connectivity.  Everything is exact and deterministic; whenever
// several cuts qualify, the one with the lexicographically least crossing
// EdgeId set is returned, so repeated runs always pick the same cut.
#pragma once

#include <optional>
#include <vector>

#include "quell/graph.hpp"

namespace quell {

// A 2-sided edge cut.  side1 always contains vertex 0 of the parent graph.
// `cyclic` records whether both sides contain a circuit (checked by pruning
// each side down to its 2-core; a loop and a parallel pair count as circuits).
struct EdgeCut {
  std::vector<VertexId> side1;
  std::vector<VertexId> side2;
  std::vector<EdgeId> crossing;  // sorted
  bool cyclic = false;
};

std::vector<int> component_labels(const CubicGraph& g);  // label per vertex, 0-based
bool is_connected(const CubicGraph& g);

// All bridges, sorted by EdgeId.  Single linear DFS (lowpoint); parallel
// edges are handled by skipping only the tree edge id used to enter a vertex,
// so the second copy of a parallel pair correctly protects the first.
std::vector<EdgeId> find_bridges(const CubicGraph& g);

// Least 2-edge-cut of a connected bridgeless graph, if any.
// Throws Disconnected / HasBridge when the preconditions fail.
std::optional<EdgeCut> find_2_edge_cut(const CubicGraph& g);

// Least cyclic 3-edge-cut of a connected bridgeless graph with no 2-edge-cut.
// In that setting the six cut-edge endpoints are automatically distinct (three
// per side); this is verified and PreconditionViolated reports any violation.
std::optional<EdgeCut> find_cyclic_3_edge_cut(const CubicGraph& g);

struct CyclicConnectivity {
  int value = 0;
  std::optional<EdgeCut> witness;  // absent when no cyclic cut exists
};

// Smallest size of an edge cut with a circuit on both sides.  When no such
// cut exists the cycle rank |E|-|V|+1 is returned with no witness; among
// cubic graphs that happens exactly for K4 (3), K3,3 (4) and the triple
// edge (2).  Any cyclic cut has size at most |E|-|V|, so the search over
// subset sizes is complete.
CyclicConnectivity cyclic_edge_connectivity(const CubicGraph& g);

}  // namespace quell
