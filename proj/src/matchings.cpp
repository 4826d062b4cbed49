#include "quell/matchings.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace quell {

namespace {

// Lexicographic backtracking over edge ids: the next edge chosen always has a
// larger id than the previous one, so matchings come out as increasing id
// sequences in lexicographic order.  Before each branch we check that every
// uncovered vertex still has a usable partner edge ahead of the cursor;
// without that the search degenerates on sparse graphs.
struct MatchingEnumerator {
  const CubicGraph& g;
  const std::function<bool(const PerfectMatching&)>& emit;
  const EdgeSet& forced;  // sorted; already covered before run()
  std::vector<char> covered;
  int uncovered = 0;
  EdgeSet chosen;
  bool stopped = false;

  bool feasible(EdgeId from) const {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (covered[v]) continue;
      bool ok = false;
      for (EdgeId e : g.incident(v)) {
        if (e < from || g.is_loop(e)) continue;
        if (!covered[g.edge(e).u] && !covered[g.edge(e).v]) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  void run(EdgeId from) {
    if (stopped) return;
    if (uncovered == 0) {
      stopped = !emit(set_union(chosen, forced));
      return;
    }
    if (!feasible(from)) return;
    for (EdgeId e = from; e < g.edge_count() && !stopped; ++e) {
      if (g.is_loop(e)) continue;
      VertexId u = g.edge(e).u, v = g.edge(e).v;
      if (covered[u] || covered[v]) continue;
      covered[u] = covered[v] = 1;
      uncovered -= 2;
      chosen.push_back(e);
      run(e + 1);
      chosen.pop_back();
      uncovered += 2;
      covered[u] = covered[v] = 0;
    }
  }
};

void enumerate_matchings(const CubicGraph& g, const EdgeSet& forced,
                         const std::function<bool(const PerfectMatching&)>& fn) {
  MatchingEnumerator en{g, fn, forced};
  en.covered.assign(g.vertex_count(), 0);
  en.uncovered = g.vertex_count();
  for (EdgeId e : forced) {
    VertexId u = g.edge(e).u, v = g.edge(e).v;
    if (g.is_loop(e)) throw GraphError(ErrorCode::LoopEdge, "loop cannot be in a matching");
    if (en.covered[u] || en.covered[v])
      throw GraphError(ErrorCode::PreconditionViolated, "forced edges are not a matching");
    en.covered[u] = en.covered[v] = 1;
    en.uncovered -= 2;
  }
  en.chosen.reserve(g.vertex_count() / 2);
  en.run(0);
}

}  // namespace

void for_each_perfect_matching(const CubicGraph& g,
                               const std::function<bool(const PerfectMatching&)>& fn) {
  enumerate_matchings(g, {}, fn);
}

void for_each_perfect_matching_containing(
    const CubicGraph& g, EdgeId e, const std::function<bool(const PerfectMatching&)>& fn) {
  if (e < 0 || e >= g.edge_count())
    throw GraphError(ErrorCode::BadIndex, "edge id out of range");
  if (g.is_loop(e)) throw GraphError(ErrorCode::LoopEdge, "no matching contains a loop");
  enumerate_matchings(g, {e}, fn);
}

std::vector<PerfectMatching> all_perfect_matchings(const CubicGraph& g) {
  std::vector<PerfectMatching> out;
  for_each_perfect_matching(g, [&](const PerfectMatching& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

long long count_perfect_matchings(const CubicGraph& g) {
  long long count = 0;
  for_each_perfect_matching(g, [&](const PerfectMatching&) {
    ++count;
    return true;
  });
  return count;
}

std::optional<PerfectMatching> find_pm_containing(const CubicGraph& g, EdgeId e) {
  if (e < 0 || e >= g.edge_count())
    throw GraphError(ErrorCode::BadIndex, "edge id out of range");
  if (g.is_loop(e)) throw GraphError(ErrorCode::LoopEdge, "no matching contains a loop");
  std::optional<PerfectMatching> found;
  // Forcing e and enumerating completions lexicographically yields the
  // lexicographically least matching containing e: inserting a common element
  // into equal-sized sorted sets preserves their relative order.
  enumerate_matchings(g, {e}, [&](const PerfectMatching& m) {
    found = m;
    return false;
  });
  return found;
}

// ---- validation ----------------------------------------------------------

bool is_perfect_matching(const CubicGraph& g, const EdgeSet& m) {
  std::vector<int> cover(g.vertex_count(), 0);
  for (EdgeId e : m) {
    if (e < 0 || e >= g.edge_count()) return false;
    if (g.is_loop(e)) return false;
    ++cover[g.edge(e).u];
    ++cover[g.edge(e).v];
  }
  for (int c : cover)
    if (c != 1) return false;
  return true;
}

namespace {

std::vector<int> subgraph_degrees(const CubicGraph& g, const EdgeSet& edges) {
  std::vector<int> deg(g.vertex_count(), 0);
  for (EdgeId e : edges) {
    if (e < 0 || e >= g.edge_count())
      throw GraphError(ErrorCode::BadIndex, "edge id " + std::to_string(e) + " out of range");
    deg[g.edge(e).u] += g.is_loop(e) ? 2 : 1;
    if (!g.is_loop(e)) deg[g.edge(e).v] += 1;
  }
  return deg;
}

}  // namespace

bool is_one_factor_plus(const CubicGraph& g, const EdgeSet& f) {
  for (int d : subgraph_degrees(g, f))
    if (d < 1) return false;
  return true;
}

bool is_parity_subgraph(const CubicGraph& g, const EdgeSet& j) {
  for (int d : subgraph_degrees(g, j))
    if (d != 1 && d != 3) return false;
  return true;
}

bool is_two_factor(const CubicGraph& g, const EdgeSet& f) {
  for (int d : subgraph_degrees(g, f))
    if (d != 2) return false;
  return true;
}

// ---- complement structure ------------------------------------------------

ComplementComponents complement_components(const CubicGraph& g, const EdgeSet& removed) {
  SubgraphView view = complement_view(g, sorted_unique(removed));
  ComplementComponents out;
  std::vector<char> seen(g.vertex_count(), 0);
  for (VertexId start = 0; start < g.vertex_count(); ++start) {
    if (seen[start]) continue;
    // Collect the component of `start` in the complement.
    std::vector<VertexId> verts;
    std::vector<EdgeId> edges;
    std::vector<char> edge_seen(g.edge_count(), 0);
    std::deque<VertexId> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      verts.push_back(v);
      for (EdgeId e : g.incident(v)) {
        if (!view.keeps(e) || edge_seen[e]) continue;
        edge_seen[e] = 1;
        edges.push_back(e);
        VertexId w = g.other_end(e, v);
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    if (edges.empty()) {
      out.isolated.push_back(start);
      continue;
    }
    bool all_two = true;
    for (VertexId v : verts) all_two = all_two && view.degree(v) == 2;
    if (!all_two) {
      std::sort(verts.begin(), verts.end());
      std::sort(edges.begin(), edges.end());
      out.paths.push_back({std::move(verts), std::move(edges)});
      continue;
    }
    // 2-regular connected component: a single circuit.  Walk it starting at
    // the least vertex along its least kept edge.
    Circuit c;
    VertexId cur = start;
    EdgeId prev = -1;
    do {
      c.vertices.push_back(cur);
      EdgeId next = -1;
      for (EdgeId e : g.incident(cur)) {
        if (view.keeps(e) && e != prev) {
          next = e;
          break;
        }
      }
      c.edges.push_back(next);
      cur = g.other_end(next, cur);
      prev = next;
    } while (cur != start);
    out.circuits.push_back(std::move(c));
  }
  return out;
}

// ---- factors -------------------------------------------------------------

OneFactorPlus extend_to_maximal_join(const CubicGraph& g, const OneFactorPlus& f) {
  if (!is_one_factor_plus(g, f))
    throw GraphError(ErrorCode::NotOneFactorPlus, "factor leaves an uncovered vertex");
  EdgeSet cur = sorted_unique(f);
  for (;;) {
    ComplementComponents comp = complement_components(g, cur);
    // Move the least edge of any offending component (even circuit or path
    // remnant) into the factor; odd circuits are left alone.  Each step
    // shrinks the complement, so this terminates.
    EdgeId move = -1;
    auto consider = [&](const std::vector<EdgeId>& edges) {
      EdgeId least = *std::min_element(edges.begin(), edges.end());
      if (move == -1 || least < move) move = least;
    };
    for (const Circuit& c : comp.circuits)
      if (!c.odd()) consider(c.edges);
    for (const ComplementComponents::Component& p : comp.paths) consider(p.edges);
    if (move == -1) return cur;
    cur = set_union(cur, {move});
  }
}

OneFactorPlus random_one_factor_plus(const CubicGraph& g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int m = g.edge_count();
  std::vector<char> in_f(m, 1);
  std::vector<int> deg(g.vertex_count(), 3);
  uint64_t steps = rng() % static_cast<uint64_t>(m + 1);
  for (uint64_t s = 0; s < steps; ++s) {
    std::vector<EdgeId> removable;
    for (EdgeId e = 0; e < m; ++e) {
      if (!in_f[e]) continue;
      VertexId u = g.edge(e).u, v = g.edge(e).v;
      if (g.is_loop(e) ? deg[u] - 2 >= 1 : (deg[u] - 1 >= 1 && deg[v] - 1 >= 1))
        removable.push_back(e);
    }
    if (removable.empty()) break;
    EdgeId pick = removable[rng() % removable.size()];
    in_f[pick] = 0;
    deg[g.edge(pick).u] -= g.is_loop(pick) ? 2 : 1;
    if (!g.is_loop(pick)) deg[g.edge(pick).v] -= 1;
  }
  EdgeSet out;
  for (EdgeId e = 0; e < m; ++e)
    if (in_f[e]) out.push_back(e);
  return out;
}

// ---- quelling pairs ------------------------------------------------------

QuellingCheck is_quelling_pair(const CubicGraph& g, const EdgeSet& factor,
                               const PerfectMatching& matching) {
  if (!is_perfect_matching(g, matching))
    throw GraphError(ErrorCode::PreconditionViolated, "second argument is not a perfect matching");
  EdgeSet removed = set_union(sorted_unique(factor), sorted_unique(matching));
  const int n = g.vertex_count();
  std::vector<int8_t> side(n, -1);
  std::vector<VertexId> parent(n, -1);
  std::vector<int> depth(n, 0);
  for (VertexId root = 0; root < n; ++root) {
    if (side[root] != -1) continue;
    side[root] = 0;
    std::deque<VertexId> queue{root};
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (EdgeId e : g.incident(v)) {
        if (contains(removed, e)) continue;
        if (g.is_loop(e)) return {std::nullopt, {v}};  // a loop is an odd cycle
        VertexId w = g.other_end(e, v);
        if (side[w] == -1) {
          side[w] = static_cast<int8_t>(1 - side[v]);
          parent[w] = v;
          depth[w] = depth[v] + 1;
          queue.push_back(w);
        } else if (side[w] == side[v]) {
          // Conflict edge closes an odd cycle through the BFS tree.
          VertexId a = v, b = w;
          std::vector<VertexId> up_a{a}, up_b{b};
          while (depth[a] > depth[b]) up_a.push_back(a = parent[a]);
          while (depth[b] > depth[a]) up_b.push_back(b = parent[b]);
          while (a != b) {
            up_a.push_back(a = parent[a]);
            up_b.push_back(b = parent[b]);
          }
          std::vector<VertexId> cycle(up_a.begin(), up_a.end());
          for (auto it = up_b.rbegin() + 1; it != up_b.rend(); ++it) cycle.push_back(*it);
          return {std::nullopt, std::move(cycle)};
        }
      }
    }
  }
  QuellingCertificate cert{sorted_unique(factor), sorted_unique(matching), std::move(side)};
  return {std::move(cert), {}};
}

bool check_quelling_certificate(const CubicGraph& g, const QuellingCertificate& cert) {
  const int n = g.vertex_count();
  if (static_cast<int>(cert.side.size()) != n) return false;
  for (int8_t s : cert.side)
    if (s != 0 && s != 1) return false;
  std::vector<int> cover(n, 0);
  for (EdgeId e : cert.matching) {
    if (e < 0 || e >= g.edge_count() || g.is_loop(e)) return false;
    ++cover[g.edge(e).u];
    ++cover[g.edge(e).v];
  }
  for (int c : cover)
    if (c != 1) return false;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (contains(cert.factor, e) || contains(cert.matching, e)) continue;
    if (cert.side[g.edge(e).u] == cert.side[g.edge(e).v]) return false;
  }
  return true;
}

// ---- whole-graph measures ------------------------------------------------

int oddness(const CubicGraph& g) {
  int best = -1;
  for_each_perfect_matching(g, [&](const PerfectMatching& m) {
    ComplementComponents comp = complement_components(g, m);
    int odd = 0;
    for (const Circuit& c : comp.circuits)
      if (c.odd()) ++odd;
    if (best == -1 || odd < best) best = odd;
    return best != 0;  // cannot improve on 0
  });
  if (best == -1) throw GraphError(ErrorCode::NoPerfectMatching, "graph has no perfect matching");
  return best;
}

std::optional<std::array<PerfectMatching, 3>> three_edge_colouring(const CubicGraph& g) {
  if (g.has_loop()) return std::nullopt;
  const int m = g.edge_count();
  if (m == 0) return std::array<PerfectMatching, 3>{};
  // Colour edges along a line-graph BFS order so that every edge after the
  // first meets an already-coloured edge; id order alone would leave long
  // independent prefixes unconstrained and the backtracking useless.
  std::vector<EdgeId> order;
  std::vector<char> queued(m, 0);
  for (EdgeId seed = 0; seed < m; ++seed) {
    if (queued[seed]) continue;
    std::deque<EdgeId> queue{seed};
    queued[seed] = 1;
    while (!queue.empty()) {
      EdgeId e = queue.front();
      queue.pop_front();
      order.push_back(e);
      for (VertexId v : {g.edge(e).u, g.edge(e).v}) {
        for (EdgeId f : g.incident(v)) {
          if (!queued[f]) {
            queued[f] = 1;
            queue.push_back(f);
          }
        }
      }
    }
  }
  std::vector<int> colour(m, -1);
  std::function<bool(size_t)> solve = [&](size_t idx) {
    if (idx == order.size()) return true;
    EdgeId e = order[idx];
    for (int c = 0; c < 3; ++c) {
      bool clash = false;
      for (VertexId v : {g.edge(e).u, g.edge(e).v}) {
        for (EdgeId f : g.incident(v)) {
          if (f != e && colour[f] == c) {
            clash = true;
            break;
          }
        }
        if (clash) break;
      }
      if (clash) continue;
      colour[e] = c;
      if (solve(idx + 1)) return true;
      colour[e] = -1;
    }
    return false;
  };
  if (!solve(0)) return std::nullopt;
  std::array<PerfectMatching, 3> classes;
  for (EdgeId e = 0; e < m; ++e) classes[colour[e]].push_back(e);
  return classes;
}

}  // namespace quell
