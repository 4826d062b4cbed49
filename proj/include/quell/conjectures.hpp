// Matching covers of cubic graphs at desk scale: disjoint-complement pairs,
// triples with empty common intersection, Berge and Fulkerson covers, and
// matchings hitting a prescribed collection of disjoint odd circuits.
//
// The pair and hitting operations ride on the quelling solver and always
// succeed on bridgeless input.  The triple and cover searches are exhaustive
// over the full perfect-matching list, so a std::nullopt from them is a
// definite refutation for that graph, not a give-up: the search space is
// enumerated completely (non-decreasing index tuples over the lexicographic
// matching list) under sound pruning.  Graphs beyond the enumeration budget
// (more than 64 edges or more than 4096 perfect matchings) throw
// SearchBudgetExceeded instead of returning an unreliable answer.
#pragma once

#include <optional>
#include <vector>

#include "quell/graph.hpp"
#include "quell/matchings.hpp"
#include "quell/solver.hpp"

namespace quell {

enum class CoverKind {
  S4Pair,           // two perfect matchings whose joint removal leaves a bipartite graph
  FRTriple,         // three perfect matchings with empty common intersection
  BergeCover,       // five perfect matchings covering every edge at least once
  FulkersonCover,   // six perfect matchings covering every edge exactly twice
  HittingMatching,  // one perfect matching meeting every listed circuit
};

const char* cover_kind_name(CoverKind kind);

// A successful search outcome.  `matchings` always carries the full multiset
// (repeats allowed for the Berge and Fulkerson kinds); the remaining fields
// are witness detail and are filled only for the kinds that use them.
struct CoverReport {
  CoverKind kind = CoverKind::S4Pair;
  std::vector<PerfectMatching> matchings;

  // S4Pair: proper 2-colouring of the graph minus both matchings, one entry
  // per vertex, least vertex of every component on side 0.
  std::vector<int8_t> bipartition;
  // BergeCover / FulkersonCover: how often each edge is covered.
  std::vector<int> multiplicities;
  // HittingMatching: for each listed circuit, the least matching edge on it.
  std::vector<EdgeId> circuit_hits;
};

// Re-validates a report against the graph with none of the search machinery.
// For HittingMatching pass the circuit collection the matching was asked to
// hit; the other kinds ignore `circuits`.
bool check_cover_report(const CubicGraph& g, const CoverReport& r,
                        const CircuitSet* circuits = nullptr);

// ---- pairs (always constructible on bridgeless input) ---------------------

// Takes the lexicographically least perfect matching as M1 and solves for a
// second matching through edge 0 whose joint removal leaves the graph
// bipartite.  Errors: Disconnected, HasBridge, NoPerfectMatching.
CoverReport find_s4_pair(const CubicGraph& g, const SolveOptions& opts = {});

// Same, but M1 is supplied by the caller (PreconditionViolated if it is not a
// perfect matching).  Succeeds for every perfect matching of every bridgeless
// cubic graph - this is the statement the solver makes constructive.
CoverReport extend_to_s4_pair(const CubicGraph& g, const PerfectMatching& m1,
                              const SolveOptions& opts = {});

// ---- hitting a collection of disjoint odd circuits ------------------------

// Finds a perfect matching containing at least one edge of every circuit in
// the collection.  The circuits must be pairwise vertex-disjoint and all odd;
// the empty collection is allowed (any matching qualifies).  Works by
// expanding every off-circuit vertex into a triangle, solving the quelling
// instance whose factor is the expansion's copy of the off-circuit edges, and
// projecting back.  Errors: Disconnected, HasBridge, CircuitsNotDisjoint,
// EvenCircuitListed, PreconditionViolated (malformed circuit).
CoverReport find_hitting_matching(const CubicGraph& g, const CircuitSet& circuits,
                                  const SolveOptions& opts = {});

// ---- exhaustive cover searches --------------------------------------------

// First triple (i <= j <= k over the lexicographic matching list) with empty
// common intersection, or std::nullopt after complete exhaustion.
std::optional<CoverReport> find_fr_triple(const CubicGraph& g);

// First pair (j <= k) completing the given matching to such a triple.
std::optional<CoverReport> extend_fr_triple(const CubicGraph& g, const PerfectMatching& m1);

// First five-element multiset covering every edge at least once.
std::optional<CoverReport> find_berge_cover(const CubicGraph& g);

// First six-element multiset covering every edge exactly twice.  Every
// success is cross-checked: each three of the six matchings must have empty
// common intersection (guaranteed by multiplicity two; TheoremViolation if
// the check ever fails, which would mean a bug).
std::optional<CoverReport> find_fulkerson_cover(const CubicGraph& g);

// First five-element multiset completing the given matching to a cover with
// every edge covered exactly twice.
std::optional<CoverReport> extend_fulkerson_cover(const CubicGraph& g,
                                                  const PerfectMatching& m1);

}  // namespace quell
