#include "quell/connectivity.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace quell {

namespace {

// Component labels of the graph minus a set of removed edges.
std::vector<int> labels_without(const CubicGraph& g, const std::vector<char>& removed_edge,
                                int* component_count = nullptr) {
  std::vector<int> label(g.vertex_count(), -1);
  int comps = 0;
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (label[start] != -1) continue;
    label[start] = comps;
    std::deque<VertexId> queue{start};
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (EdgeId e : g.incident(v)) {
        if (!removed_edge.empty() && removed_edge[e]) continue;
        VertexId w = g.other_end(e, v);
        if (label[w] == -1) {
          label[w] = comps;
          queue.push_back(w);
        }
      }
    }
    ++comps;
  }
  if (component_count) *component_count = comps;
  return label;
}

// Does the subgraph induced on `in_side` contain a circuit?  Prune vertices of
// degree <= 1 repeatedly; anything left lies on a circuit.  Loops contribute 2
// to the degree and survive, as they should (a loop is a circuit).
bool side_has_circuit(const CubicGraph& g, const std::vector<char>& in_side,
                      const std::vector<char>& removed_edge) {
  std::vector<int> deg(g.vertex_count(), 0);
  std::vector<char> alive = in_side;
  auto edge_alive = [&](EdgeId e) {
    return !removed_edge[e] && alive[g.edge(e).u] && alive[g.edge(e).v];
  };
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (edge_alive(e)) {
      deg[g.edge(e).u] += g.is_loop(e) ? 2 : 1;
      if (!g.is_loop(e)) deg[g.edge(e).v] += 1;
    }
  std::deque<VertexId> prune;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (alive[v] && deg[v] <= 1) prune.push_back(v);
  int alive_count = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (alive[v]) ++alive_count;
  while (!prune.empty()) {
    VertexId v = prune.front();
    prune.pop_front();
    if (!alive[v]) continue;
    alive[v] = 0;
    --alive_count;
    for (EdgeId e : g.incident(v)) {
      if (removed_edge[e] || g.is_loop(e)) continue;
      VertexId w = g.other_end(e, v);
      if (alive[w] && --deg[w] <= 1) prune.push_back(w);
    }
  }
  return alive_count > 0;
}

EdgeCut make_cut(const CubicGraph& g, const std::vector<int>& label,
                 const std::vector<char>& side1_of_label, const std::vector<EdgeId>& crossing,
                 const std::vector<char>& removed_edge) {
  EdgeCut cut;
  std::vector<char> in1(g.vertex_count(), 0), in2(g.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (side1_of_label[label[v]]) {
      cut.side1.push_back(v);
      in1[v] = 1;
    } else {
      cut.side2.push_back(v);
      in2[v] = 1;
    }
  }
  cut.crossing = crossing;
  cut.cyclic = side_has_circuit(g, in1, removed_edge) && side_has_circuit(g, in2, removed_edge);
  return cut;
}

}  // namespace

std::vector<int> component_labels(const CubicGraph& g) {
  return labels_without(g, std::vector<char>(g.edge_count(), 0));
}

bool is_connected(const CubicGraph& g) {
  if (g.vertex_count() == 0) return true;
  int comps = 0;
  labels_without(g, std::vector<char>(g.edge_count(), 0), &comps);
  return comps == 1;
}

std::vector<EdgeId> find_bridges(const CubicGraph& g) {
  const int n = g.vertex_count();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<EdgeId> bridges;
  int timer = 0;
  // Iterative DFS; each frame remembers the edge used to enter the vertex so
  // that exactly one copy of a parallel pair is skipped.
  struct Frame {
    VertexId v;
    EdgeId via;
    size_t next = 0;
  };
  for (VertexId root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack{{root, -1}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next < g.incident(top.v).size()) {
        // Edge ids are unique per incidence list, so comparing against the
        // entering edge id skips exactly one copy of a parallel pair; the
        // other copy is then seen as a back edge, as it should be.
        EdgeId e = g.incident(top.v)[top.next++];
        if (e == top.via || g.is_loop(e)) continue;
        VertexId w = g.other_end(e, top.v);
        if (disc[w] == -1) {
          disc[w] = low[w] = timer++;
          stack.push_back({w, e});
        } else {
          low[top.v] = std::min(low[top.v], disc[w]);
        }
      } else {
        VertexId v = top.v;
        EdgeId via = top.via;
        stack.pop_back();
        if (!stack.empty()) {
          VertexId parent = stack.back().v;
          low[parent] = std::min(low[parent], low[v]);
          if (low[v] > disc[parent]) bridges.push_back(via);
        }
      }
    }
  }
  std::sort(bridges.begin(), bridges.end());
  return bridges;
}

std::optional<EdgeCut> find_2_edge_cut(const CubicGraph& g) {
  if (!is_connected(g)) throw GraphError(ErrorCode::Disconnected, "graph is not connected");
  if (!find_bridges(g).empty()) throw GraphError(ErrorCode::HasBridge, "graph has a bridge");
  const int m = g.edge_count();
  std::vector<char> removed(m, 0);
  for (EdgeId a = 0; a < m; ++a) {
    for (EdgeId b = a + 1; b < m; ++b) {
      removed[a] = removed[b] = 1;
      int comps = 0;
      std::vector<int> label = labels_without(g, removed, &comps);
      if (comps == 2) {
        // With no bridges the two removed edges are exactly the crossing set.
        std::vector<char> side1_of_label{label[0] == 0, label[0] != 0};
        removed[a] = removed[b] = 0;
        std::vector<char> rm(m, 0);
        rm[a] = rm[b] = 1;
        return make_cut(g, label, side1_of_label, {a, b}, rm);
      }
      removed[a] = removed[b] = 0;
    }
  }
  return std::nullopt;
}

std::optional<EdgeCut> find_cyclic_3_edge_cut(const CubicGraph& g) {
  if (!is_connected(g)) throw GraphError(ErrorCode::Disconnected, "graph is not connected");
  if (!find_bridges(g).empty()) throw GraphError(ErrorCode::HasBridge, "graph has a bridge");
  if (find_2_edge_cut(g))
    throw GraphError(ErrorCode::PreconditionViolated, "graph has a 2-edge-cut");
  const int m = g.edge_count();
  std::vector<char> removed(m, 0);
  for (EdgeId a = 0; a < m; ++a) {
    for (EdgeId b = a + 1; b < m; ++b) {
      for (EdgeId c = b + 1; c < m; ++c) {
        removed[a] = removed[b] = removed[c] = 1;
        int comps = 0;
        std::vector<int> label = labels_without(g, removed, &comps);
        if (comps == 2) {
          bool all_cross = true;
          for (EdgeId e : {a, b, c})
            all_cross = all_cross && label[g.edge(e).u] != label[g.edge(e).v];
          if (all_cross) {
            std::vector<char> side1_of_label{label[0] == 0, label[0] != 0};
            std::vector<char> rm(m, 0);
            rm[a] = rm[b] = rm[c] = 1;
            EdgeCut cut = make_cut(g, label, side1_of_label, {a, b, c}, rm);
            if (cut.cyclic) {
              // Three attachments per side; with no 2-edge-cut they must be
              // pairwise distinct on each side.
              for (int side = 0; side < 2; ++side) {
                std::vector<VertexId> att;
                for (EdgeId e : cut.crossing)
                  att.push_back(label[g.edge(e).u] == (side == 0 ? label[0] : 1 - label[0])
                                    ? g.edge(e).u
                                    : g.edge(e).v);
                std::sort(att.begin(), att.end());
                if (std::adjacent_find(att.begin(), att.end()) != att.end())
                  throw GraphError(ErrorCode::PreconditionViolated,
                                   "cyclic 3-cut with coincident attachment vertices");
              }
              removed[a] = removed[b] = removed[c] = 0;
              return cut;
            }
          }
        }
        removed[a] = removed[b] = removed[c] = 0;
      }
    }
  }
  return std::nullopt;
}

CyclicConnectivity cyclic_edge_connectivity(const CubicGraph& g) {
  if (!is_connected(g)) throw GraphError(ErrorCode::Disconnected, "graph is not connected");
  const int m = g.edge_count();
  const int n = g.vertex_count();
  const int rank = m - n + 1;
  // A cut with circuits on both sides has size at most rank-1 = m-n, because
  // each side contributes at least one independent cycle.
  std::vector<char> removed(m, 0);
  for (int k = 1; k <= m - n; ++k) {
    std::vector<EdgeId> subset(k);
    std::function<std::optional<EdgeCut>(int, int)> scan = [&](int depth,
                                                               int first) -> std::optional<EdgeCut> {
      if (depth == k) {
        int comps = 0;
        std::vector<int> label = labels_without(g, removed, &comps);
        if (comps < 2) return std::nullopt;
        // Every removed edge must cross between two components, otherwise no
        // grouping of components has exactly this crossing set.
        for (EdgeId e : subset)
          if (label[g.edge(e).u] == label[g.edge(e).v]) return std::nullopt;
        // Group the components into two sides (component 0 stays on side 1)
        // and require the crossing set to be exactly the removed subset.
        for (unsigned mask = 0; mask < (1u << (comps - 1)); ++mask) {
          std::vector<char> side1_of_label(comps, 0);
          side1_of_label[0] = 1;
          for (int c = 1; c < comps; ++c)
            side1_of_label[c] = (mask >> (c - 1)) & 1;
          bool ok = true;
          int side1_comps = 0;
          for (int c = 0; c < comps; ++c) side1_comps += side1_of_label[c];
          if (side1_comps == 0 || side1_comps == comps) continue;
          for (EdgeId e : subset) {
            if (side1_of_label[label[g.edge(e).u]] == side1_of_label[label[g.edge(e).v]]) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          EdgeCut cut = make_cut(g, label, side1_of_label, subset, removed);
          if (cut.cyclic) return cut;
        }
        return std::nullopt;
      }
      for (EdgeId e = first; e < m - (k - depth - 1); ++e) {
        subset[depth] = e;
        removed[e] = 1;
        auto found = scan(depth + 1, e + 1);
        removed[e] = 0;
        if (found) return found;
      }
      return std::nullopt;
    };
    auto found = scan(0, 0);
    if (found) return {k, std::move(found)};
  }
  return {rank, std::nullopt};
}

}  // namespace quell
