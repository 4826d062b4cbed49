#include "quell/conjectures.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>

#include "quell/connectivity.hpp"
#include "quell/reductions.hpp"

namespace quell {

namespace {

// The exhaustive searches pack matchings into one machine word per matching,
// so they are capped at 64 edges; the matching list itself is capped so a
// pathological input cannot silently turn a "definite refutation" search into
// an hour of spinning.
constexpr int kMaxCoverEdges = 64;
constexpr std::size_t kMaxCoverMatchings = 4096;

void require_bridgeless(const CubicGraph& g) {
  if (!is_connected(g))
    throw GraphError(ErrorCode::Disconnected, "cover search requires a connected graph");
  if (!find_bridges(g).empty())
    throw GraphError(ErrorCode::HasBridge, "cover search requires a bridgeless graph");
}

void require_perfect(const CubicGraph& g, const PerfectMatching& m, const char* role) {
  for (EdgeId e : m)
    if (e < 0 || e >= g.edge_count())
      throw GraphError(ErrorCode::BadIndex,
                       std::string(role) + " contains edge id " + std::to_string(e));
  if (!is_perfect_matching(g, m))
    throw GraphError(ErrorCode::PreconditionViolated,
                     std::string(role) + " is not a perfect matching");
}

// All perfect matchings in lexicographic order, with the search budget applied.
std::vector<PerfectMatching> matching_list(const CubicGraph& g) {
  if (g.edge_count() > kMaxCoverEdges)
    throw GraphError(ErrorCode::SearchBudgetExceeded,
                     "cover search supports at most 64 edges, got " +
                         std::to_string(g.edge_count()));
  std::vector<PerfectMatching> pms;
  bool overflow = false;
  for_each_perfect_matching(g, [&](const PerfectMatching& m) {
    if (pms.size() == kMaxCoverMatchings) {
      overflow = true;
      return false;
    }
    pms.push_back(m);
    return true;
  });
  if (overflow)
    throw GraphError(ErrorCode::SearchBudgetExceeded,
                     "cover search supports at most 4096 perfect matchings");
  return pms;
}

uint64_t mask_of(const PerfectMatching& m) {
  uint64_t mask = 0;
  for (EdgeId e : m) mask |= uint64_t{1} << e;
  return mask;
}

std::vector<uint64_t> masks_of(const std::vector<PerfectMatching>& pms) {
  std::vector<uint64_t> masks(pms.size());
  for (std::size_t i = 0; i < pms.size(); ++i) masks[i] = mask_of(pms[i]);
  return masks;
}

std::vector<int> multiplicity_vector(const CubicGraph& g,
                                     const std::vector<PerfectMatching>& ms) {
  std::vector<int> mult(g.edge_count(), 0);
  for (const auto& m : ms)
    for (EdgeId e : m) ++mult[e];
  return mult;
}

// Every three matchings of an exact-double cover must have empty common
// intersection; a failure here cannot be a property of the graph, only a bug.
void verify_cover_triples(const std::vector<PerfectMatching>& ms) {
  std::vector<uint64_t> masks = masks_of(ms);
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j)
      for (std::size_t k = j + 1; k < masks.size(); ++k)
        if (masks[i] & masks[j] & masks[k])
          throw GraphError(ErrorCode::TheoremViolation,
                           "three matchings of an exact-double cover share an edge");
}

// Depth-first search over non-decreasing index tuples.  `suffix_union[i]` is
// the union of masks[i..]; once a still-needed edge is outside it, no tuple
// drawing further indices from the suffix can work, and because the suffix
// only shrinks as i grows the loop can break rather than continue.
struct CoverSearch {
  const std::vector<uint64_t>& masks;
  std::vector<uint64_t> suffix_union;
  uint64_t full;
  int half_n;
  std::array<int, 6> chosen{};

  CoverSearch(const std::vector<uint64_t>& masks_, uint64_t full_, int half_n_)
      : masks(masks_), suffix_union(masks_.size() + 1, 0), full(full_), half_n(half_n_) {
    for (int i = static_cast<int>(masks.size()) - 1; i >= 0; --i)
      suffix_union[i] = suffix_union[i + 1] | masks[i];
  }

  // Picks `target - depth` more matchings so every edge ends covered >= once.
  bool berge(int depth, int target, int cur, uint64_t covered) {
    if (depth == target) return covered == full;
    uint64_t uncovered = full & ~covered;
    if (std::popcount(uncovered) > (target - depth) * half_n) return false;
    for (int i = cur; i < static_cast<int>(masks.size()); ++i) {
      if (uncovered & ~suffix_union[i]) break;
      chosen[depth] = i;
      if (berge(depth + 1, target, i, covered | masks[i])) return true;
    }
    return false;
  }

  // Picks `6 - depth` more matchings so every edge ends covered exactly twice.
  bool fulkerson(int depth, int cur, uint64_t once, uint64_t twice) {
    if (depth == 6) return twice == full;
    uint64_t needy = full & ~twice;
    for (int i = cur; i < static_cast<int>(masks.size()); ++i) {
      if (needy & ~suffix_union[i]) break;
      if (masks[i] & twice) continue;
      chosen[depth] = i;
      if (fulkerson(depth + 1, i, once | masks[i], twice | (once & masks[i]))) return true;
    }
    return false;
  }
};

CoverReport pair_report(const PerfectMatching& m1, const QuellingCertificate& cert) {
  CoverReport r;
  r.kind = CoverKind::S4Pair;
  r.matchings = {m1, cert.matching};
  r.bipartition = cert.side;
  return r;
}

}  // namespace

const char* cover_kind_name(CoverKind kind) {
  switch (kind) {
    case CoverKind::S4Pair: return "S4Pair";
    case CoverKind::FRTriple: return "FRTriple";
    case CoverKind::BergeCover: return "BergeCover";
    case CoverKind::FulkersonCover: return "FulkersonCover";
    case CoverKind::HittingMatching: return "HittingMatching";
  }
  return "?";
}

bool check_cover_report(const CubicGraph& g, const CoverReport& r,
                        const CircuitSet* circuits) {
  for (const auto& m : r.matchings) {
    for (EdgeId e : m)
      if (e < 0 || e >= g.edge_count()) return false;
    if (!is_perfect_matching(g, m)) return false;
  }
  switch (r.kind) {
    case CoverKind::S4Pair: {
      if (r.matchings.size() != 2) return false;
      if (static_cast<int>(r.bipartition.size()) != g.vertex_count()) return false;
      std::vector<char> removed(g.edge_count(), 0);
      for (const auto& m : r.matchings)
        for (EdgeId e : m) removed[e] = 1;
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (removed[e]) continue;
        const Edge& ed = g.edge(e);
        if (ed.u == ed.v) return false;  // a surviving loop is an odd circuit
        int8_t a = r.bipartition[ed.u], b = r.bipartition[ed.v];
        if ((a != 0 && a != 1) || (b != 0 && b != 1) || a == b) return false;
      }
      return true;
    }
    case CoverKind::FRTriple: {
      if (r.matchings.size() != 3) return false;
      std::vector<int> mult = multiplicity_vector(g, r.matchings);
      return std::none_of(mult.begin(), mult.end(), [](int c) { return c == 3; });
    }
    case CoverKind::BergeCover: {
      if (r.matchings.size() != 5) return false;
      std::vector<int> mult = multiplicity_vector(g, r.matchings);
      if (r.multiplicities != mult) return false;
      return std::all_of(mult.begin(), mult.end(), [](int c) { return c >= 1; });
    }
    case CoverKind::FulkersonCover: {
      if (r.matchings.size() != 6) return false;
      std::vector<int> mult = multiplicity_vector(g, r.matchings);
      if (r.multiplicities != mult) return false;
      return std::all_of(mult.begin(), mult.end(), [](int c) { return c == 2; });
    }
    case CoverKind::HittingMatching: {
      if (r.matchings.size() != 1) return false;
      if (!circuits) return true;  // without the circuits only the matching is checkable
      if (r.circuit_hits.size() != circuits->size()) return false;
      PerfectMatching m = r.matchings[0];
      std::sort(m.begin(), m.end());
      for (std::size_t i = 0; i < circuits->size(); ++i) {
        EdgeId hit = r.circuit_hits[i];
        if (!contains(m, hit)) return false;
        const auto& edges = (*circuits)[i].edges;
        if (std::find(edges.begin(), edges.end(), hit) == edges.end()) return false;
      }
      return true;
    }
  }
  return false;
}

CoverReport find_s4_pair(const CubicGraph& g, const SolveOptions& opts) {
  require_bridgeless(g);
  std::optional<PerfectMatching> first;
  for_each_perfect_matching(g, [&](const PerfectMatching& m) {
    first = m;
    return false;
  });
  if (!first)
    throw GraphError(ErrorCode::NoPerfectMatching, "graph has no perfect matching");
  return extend_to_s4_pair(g, *first, opts);
}

CoverReport extend_to_s4_pair(const CubicGraph& g, const PerfectMatching& m1,
                              const SolveOptions& opts) {
  require_bridgeless(g);
  require_perfect(g, m1, "m1");
  // Any anchor works; edge 0 keeps the result deterministic.
  SolveReport rep = find_quelling_matching(g, m1, 0, opts);
  return pair_report(m1, rep.certificate);
}

CoverReport find_hitting_matching(const CubicGraph& g, const CircuitSet& circuits,
                                  const SolveOptions& opts) {
  require_bridgeless(g);
  for (const Circuit& c : circuits)
    if (!c.odd())
      throw GraphError(ErrorCode::EvenCircuitListed,
                       "every listed circuit must have odd length");
  // Expand every off-circuit vertex into a triangle.  The copies of the
  // off-circuit edges form a perfect matching of the expansion whose
  // complement consists of the listed circuits plus the new triangles - all
  // odd.  Any matching quelling that factor must break every one of those
  // circuits, and because it meets each triangle in an internal edge it never
  // takes all three outer edges of a triangle, so it projects back cleanly.
  ReductionTrace t = expand_to_triangles(g, circuits);
  const ReducedGraph& child = t.children[0];
  std::vector<char> on_circuit(g.edge_count(), 0);
  for (const Circuit& c : circuits)
    for (EdgeId e : c.edges) on_circuit[e] = 1;
  OneFactorPlus off_factor;
  for (EdgeId ce = 0; ce < child.graph.edge_count(); ++ce) {
    EdgeId pe = child.edge_to_parent[ce];
    if (pe >= 0 && !on_circuit[pe]) off_factor.push_back(ce);
  }
  SolveReport rep = find_quelling_matching(child.graph, off_factor, off_factor.front(), opts);
  PerfectMatching m = project_from_expansion(t, rep.certificate.matching);
  std::sort(m.begin(), m.end());

  CoverReport r;
  r.kind = CoverKind::HittingMatching;
  r.matchings = {m};
  for (const Circuit& c : circuits) {
    EdgeId hit = -1;
    for (EdgeId e : c.edges)
      if (contains(m, e) && (hit < 0 || e < hit)) hit = e;
    if (hit < 0)
      throw GraphError(ErrorCode::TheoremViolation, "hitting matching missed a circuit");
    r.circuit_hits.push_back(hit);
  }
  return r;
}

std::optional<CoverReport> find_fr_triple(const CubicGraph& g) {
  require_bridgeless(g);
  std::vector<PerfectMatching> pms = matching_list(g);
  std::vector<uint64_t> masks = masks_of(pms);
  const int n = static_cast<int>(pms.size());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const uint64_t ij = masks[i] & masks[j];
      for (int k = j; k < n; ++k)
        if ((ij & masks[k]) == 0) {
          CoverReport r;
          r.kind = CoverKind::FRTriple;
          r.matchings = {pms[i], pms[j], pms[k]};
          return r;
        }
    }
  return std::nullopt;
}

std::optional<CoverReport> extend_fr_triple(const CubicGraph& g, const PerfectMatching& m1) {
  require_bridgeless(g);
  require_perfect(g, m1, "m1");
  std::vector<PerfectMatching> pms = matching_list(g);
  std::vector<uint64_t> masks = masks_of(pms);
  const uint64_t m1_mask = mask_of(m1);
  const int n = static_cast<int>(pms.size());
  for (int j = 0; j < n; ++j) {
    const uint64_t mj = m1_mask & masks[j];
    for (int k = j; k < n; ++k)
      if ((mj & masks[k]) == 0) {
        CoverReport r;
        r.kind = CoverKind::FRTriple;
        r.matchings = {m1, pms[j], pms[k]};
        return r;
      }
  }
  return std::nullopt;
}

std::optional<CoverReport> find_berge_cover(const CubicGraph& g) {
  require_bridgeless(g);
  std::vector<PerfectMatching> pms = matching_list(g);
  std::vector<uint64_t> masks = masks_of(pms);
  const uint64_t full = g.edge_count() == 64 ? ~uint64_t{0}
                                             : (uint64_t{1} << g.edge_count()) - 1;
  CoverSearch search(masks, full, g.vertex_count() / 2);
  if (!search.berge(0, 5, 0, 0)) return std::nullopt;
  CoverReport r;
  r.kind = CoverKind::BergeCover;
  for (int d = 0; d < 5; ++d) r.matchings.push_back(pms[search.chosen[d]]);
  r.multiplicities = multiplicity_vector(g, r.matchings);
  return r;
}

std::optional<CoverReport> find_fulkerson_cover(const CubicGraph& g) {
  require_bridgeless(g);
  std::vector<PerfectMatching> pms = matching_list(g);
  std::vector<uint64_t> masks = masks_of(pms);
  const uint64_t full = g.edge_count() == 64 ? ~uint64_t{0}
                                             : (uint64_t{1} << g.edge_count()) - 1;
  CoverSearch search(masks, full, g.vertex_count() / 2);
  if (!search.fulkerson(0, 0, 0, 0)) return std::nullopt;
  CoverReport r;
  r.kind = CoverKind::FulkersonCover;
  for (int d = 0; d < 6; ++d) r.matchings.push_back(pms[search.chosen[d]]);
  r.multiplicities = multiplicity_vector(g, r.matchings);
  verify_cover_triples(r.matchings);
  return r;
}

std::optional<CoverReport> extend_fulkerson_cover(const CubicGraph& g,
                                                  const PerfectMatching& m1) {
  require_bridgeless(g);
  require_perfect(g, m1, "m1");
  std::vector<PerfectMatching> pms = matching_list(g);
  std::vector<uint64_t> masks = masks_of(pms);
  const uint64_t full = g.edge_count() == 64 ? ~uint64_t{0}
                                             : (uint64_t{1} << g.edge_count()) - 1;
  CoverSearch search(masks, full, g.vertex_count() / 2);
  if (!search.fulkerson(1, 0, mask_of(m1), 0)) return std::nullopt;
  CoverReport r;
  r.kind = CoverKind::FulkersonCover;
  r.matchings.push_back(m1);
  for (int d = 1; d < 6; ++d) r.matchings.push_back(pms[search.chosen[d]]);
  r.multiplicities = multiplicity_vector(g, r.matchings);
  verify_cover_triples(r.matchings);
  return r;
}

}  // namespace quell
