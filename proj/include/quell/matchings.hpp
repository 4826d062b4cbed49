// Perfect matchings, 1+-factors, circuit structure and quelling pairs.
//
// Edge sets are sorted EdgeId vectors throughout.  The matching enumerator
// emits matchings in lexicographic order of their sorted id sequences, which
// is what makes "first matching found" well-defined everywhere else.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "quell/graph.hpp"

namespace quell {

using EdgeSet = std::vector<EdgeId>;
using PerfectMatching = EdgeSet;
using OneFactorPlus = EdgeSet;

// A circuit as a closed walk: edges[i] joins vertices[i] and
// vertices[(i+1) % size].  A loop is a circuit of length 1 and a parallel
// pair one of length 2.
struct Circuit {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  bool odd() const { return edges.size() % 2 == 1; }
};

using CircuitSet = std::vector<Circuit>;

// Components of the spanning subgraph left after deleting an edge set,
// classified.  A component is listed in exactly one bucket.  With a valid
// 1+-factor removed every degree is <= 2, so `paths` then holds all
// non-circuit components with edges; for arbitrary removed sets it also
// collects branching components.
struct ComplementComponents {
  CircuitSet circuits;
  std::vector<VertexId> isolated;
  struct Component {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
  };
  std::vector<Component> paths;
};

ComplementComponents complement_components(const CubicGraph& g, const EdgeSet& removed);

// ---- validation ----------------------------------------------------------

bool is_perfect_matching(const CubicGraph& g, const EdgeSet& m);
bool is_one_factor_plus(const CubicGraph& g, const EdgeSet& f);   // min degree >= 1
bool is_parity_subgraph(const CubicGraph& g, const EdgeSet& j);   // degrees 1 or 3
bool is_two_factor(const CubicGraph& g, const EdgeSet& f);        // all degrees 2

// ---- enumeration ---------------------------------------------------------

// Calls fn for every perfect matching, in lexicographic EdgeId order, each
// exactly once.  fn returns false to stop early.  Loops are never part of a
// matching.
void for_each_perfect_matching(const CubicGraph& g,
                               const std::function<bool(const PerfectMatching&)>& fn);

// Same stream restricted to matchings containing edge e (still lexicographic).
// Throws BadIndex for an out-of-range id and LoopEdge for a loop.
void for_each_perfect_matching_containing(
    const CubicGraph& g, EdgeId e, const std::function<bool(const PerfectMatching&)>& fn);

std::vector<PerfectMatching> all_perfect_matchings(const CubicGraph& g);
long long count_perfect_matchings(const CubicGraph& g);

// Lexicographically least perfect matching containing e, if any.
// Throws LoopEdge when e is a loop.
std::optional<PerfectMatching> find_pm_containing(const CubicGraph& g, EdgeId e);

// ---- factors and joins ---------------------------------------------------

// Grows a 1+-factor until every component of the complement is an odd
// circuit (isolated vertices aside): even circuits and path remnants are
// absorbed one least-id edge at a time.  Existing complement odd circuits are
// never touched.  Throws NotOneFactorPlus.
OneFactorPlus extend_to_maximal_join(const CubicGraph& g, const OneFactorPlus& f);

// Seeded random 1+-factor: start from all of E(G) and repeatedly delete a
// random edge whose removal keeps minimum degree 1, for a seeded number of
// steps.  Same seed, same factor.
OneFactorPlus random_one_factor_plus(const CubicGraph& g, uint64_t seed);

// ---- quelling pairs ------------------------------------------------------

// Certificate that G minus (factor plus matching) is bipartite: a global
// 2-colouring, component by component (the least vertex of each component is
// on side 0).  Checkable without any of the search machinery.
struct QuellingCertificate {
  EdgeSet factor;
  EdgeSet matching;
  std::vector<int8_t> side;  // one entry per vertex, 0 or 1
};

struct QuellingCheck {
  std::optional<QuellingCertificate> certificate;
  std::vector<VertexId> odd_cycle;  // witness when no certificate
};

// Is (F, M) a quelling pair, i.e. is G minus (F union M) bipartite?  F may be
// any edge set; M must be a perfect matching (PreconditionViolated if not).
QuellingCheck is_quelling_pair(const CubicGraph& g, const EdgeSet& factor,
                               const PerfectMatching& matching);

// Independent re-check of a certificate; shares no logic with the producer.
bool check_quelling_certificate(const CubicGraph& g, const QuellingCertificate& cert);

// ---- whole-graph measures ------------------------------------------------

// Minimum number of odd circuits over all 2-factors (complements of perfect
// matchings).  Throws NoPerfectMatching.
int oddness(const CubicGraph& g);

// Proper 3-edge-colouring as three colour classes (each one a perfect
// matching), or absent.  First admissible colouring in edge-id order, so the
// result is deterministic.  Graphs with loops are never colourable.
std::optional<std::array<PerfectMatching, 3>> three_edge_colouring(const CubicGraph& g);

}  // namespace quell
