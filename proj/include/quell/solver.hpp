// Finding a quelling matching: given a connected bridgeless cubic multigraph
// G, a 1+-factor F and a non-loop edge e, produce a perfect matching M with
// e in M such that G minus (F union M) is bipartite.
//
// The solver runs a structural pipeline first - 3-edge-colouring, 2-cut
// splits, cyclic 3-cut splits, then the distance-2 endpoint-deletion
// reductions - recursing on the reduced graphs and lifting child matchings
// back up.  The structural stages operate on a maximal-join extension of F
// (which satisfies all their parity preconditions), but every lifted
// candidate is verified against the original F before it is accepted; on a
// miss the search simply continues.  When the structural stages run out of
// candidates an exhaustive enumeration oracle takes over.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quell/graph.hpp"
#include "quell/matchings.hpp"

namespace quell {

struct SolveStats {
  int max_depth = 0;                   // deepest recursion level reached
  long long matchings_enumerated = 0;  // candidates tested against a factor
  long long reductions_applied = 0;    // reduction traces constructed
  long long millis = 0;                // wall time of the whole call
};

struct SolveOptions {
  // When false the oracle stage is skipped everywhere and an exhausted
  // pipeline reports SearchBudgetExceeded instead of falling back.
  bool use_oracle = true;
  // The oracle refuses graphs on more than 20 vertices unless this is set;
  // enumeration cost beyond that is unbounded for batch use.
  bool allow_large_oracle = false;
  // Cooperative wall-clock budget for the whole call, checked once per
  // candidate matching and per recursion level; 0 means unlimited.  An
  // exceeded budget surfaces as SearchBudgetExceeded.
  long long time_budget_ms = 0;
};

struct SolveReport {
  QuellingCertificate certificate;  // re-checkable with no solver machinery
  std::vector<std::string> path;    // summaries of the reductions on the
                                    // accepted chain, outermost first
  bool oracle_used = false;         // the accepted matching came from the
                                    // enumeration stage at some level
  SolveStats stats;
};

// Lexicographically least perfect matching containing e whose pair with
// `factor` is quelling, or absent when no perfect matching through e works.
// Pure enumeration; no structural machinery, no size guard.  Throws
// BadIndex / LoopEdge for an invalid e.
std::optional<PerfectMatching> oracle_quelling_matching(const CubicGraph& g,
                                                        const OneFactorPlus& factor,
                                                        EdgeId e);

// Full pipeline described above.  Throws Disconnected / HasBridge /
// NotOneFactorPlus / BadIndex / LoopEdge for invalid inputs,
// SearchBudgetExceeded when the oracle is disabled (or size-capped) and the
// pipeline exhausts, and TheoremViolation if the exhaustive oracle proves
// that no quelling matching through e exists - which no bridgeless input
// should ever trigger.
SolveReport find_quelling_matching(const CubicGraph& g, const OneFactorPlus& factor,
                                   EdgeId e, const SolveOptions& options = {});

}  // namespace quell
