#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqham/copies.hpp"
#include "sqham/exact.hpp"
#include "sqham/graph.hpp"
#include "sqham/rng.hpp"

namespace sqham {

/// q = (2/(n-1)!)^(1/(2n)), the spread parameter of the square-cycle copy
/// family. q^(2n) is kept exactly so comparisons against powers of q can be
/// done in rationals.
struct SpreadParams {
  int n = 0;
  Rational q_pow_2n;
  HighFloat q;
};

SpreadParams spread_params(int n);

/// Decides ratio^(1/size) <= q exactly, via ratio^(2n) <= (q^(2n))^size.
bool within_power_of_q(const Rational& ratio, std::size_t size, const SpreadParams& params);

/// One checked instance of an inequality lhs <= rhs.
///
/// lhs is always an exact count or ratio. rhs is exact when it is rational;
/// otherwise rhs_exact is empty and `holds` was decided either exactly by an
/// algebraic rearrangement or conservatively against a rational lower
/// enclosure of rhs, so a reported `holds` is never an artifact of rounding.
struct AuditReport {
  std::string statement;
  std::string instance;
  Rational lhs;
  std::optional<Rational> rhs_exact;
  std::string rhs_text;
  bool holds = false;
  std::string note;

  std::string lhs_text() const;
};

// Local spread profile

enum class ProfileMode { exhaustive, sampled };

struct SpreadProfileRow {
  std::size_t size = 0;
  std::size_t instances = 0;
  /// max over I of |copies containing I| / |copies|
  Rational max_ratio;
  HighFloat max_local_spread;
  HighFloat q;
  bool within_q = false;
  /// Local spreads of the sampled sets; empty in exhaustive mode.
  std::vector<double> samples;
};

/// For each requested |I| > 0, the largest local spread
/// (|copies containing I| / |copies|)^(1/|I|) over edge sets I that lie in
/// some copy. Every such I is the image of a subset of the identity copy under
/// a vertex permutation, so exhaustive mode ranges over subsets of that copy.
/// Size 0 is skipped. Reports, never asserts, the comparison with q.
std::vector<SpreadProfileRow> local_spread_profile(const CopyCatalog& catalog, std::span<const std::size_t> sizes,
                                                   ProfileMode mode, std::size_t samples, RngStream& rng);

// Counting bounds

/// |copies containing I| <= 16^l (n - ceil((l+c)/2) - 1)! for l = |I| <= n/3.
AuditReport check_prop_easy(const CopyCatalog& catalog, const EdgeSet& I);

/// check_prop_easy on every I inside the identity copy with
/// |I| <= min(max_edges, n/3).
std::vector<AuditReport> audit_prop_easy(const CopyCatalog& catalog, std::size_t max_edges);

/// counts[l][c]: number of subgraphs (edge subsets) of F with l edges and c
/// components.
struct SubgraphCensus {
  std::size_t h = 0;
  std::vector<std::vector<std::uint64_t>> counts;
};

inline constexpr std::size_t kMaxCensusEdges = 20;

SubgraphCensus census_subgraphs(const EdgeSet& F, std::size_t max_edges = kMaxCensusEdges);

/// #{l-edge, c-component subgraphs of F} <= (8e)^l C(2h, c), h = |F|.
AuditReport check_prop_easy2(const EdgeSet& F, std::size_t l, std::size_t c);
/// The same for every (l, c) with 0 <= c <= l <= h, from one census pass.
std::vector<AuditReport> audit_prop_easy2(const EdgeSet& F);

/// Connected h-edge subgraphs of g that contain `root`; a one-vertex graph
/// counts for h = 0.
std::uint64_t count_connected_subgraphs(const Graph& g, int root, std::size_t h);

/// #{connected h-edge subgraphs containing root} < (e * maxdeg)^h.
/// Rejects instances with (e * maxdeg)^h above `budget`.
AuditReport check_tree_lemma(const Graph& g, int root, std::size_t h, double budget = 1e7);

/// Rooted subtrees with `vertices` vertices of the infinite tree in which
/// every node has `branching` children, counted by explicit enumeration.
std::uint64_t enumerate_rooted_subtrees(int branching, int vertices);
/// Closed form C(b v, v) / ((b - 1) v + 1).
BigInt rooted_subtree_formula(int branching, int vertices);
AuditReport check_subtree_formula(int branching, int vertices);

/// l <= 2v - 3c for I inside the square-cycle copy S with l <= n/3.
AuditReport check_ivc(const CyclicOrdering& S, const EdgeSet& I);
/// check_ivc on every I inside the identity copy with l <= min(max_edges, n/3).
std::vector<AuditReport> audit_ivc(int n, std::size_t max_edges);

// Overlap distribution

/// counts[i] = #{J : |E(J) ∩ E(S)| = i}.
struct OverlapHistogram {
  int n = 0;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> counts;

  Rational f(std::size_t i) const;
  Rational sum() const;
};

OverlapHistogram overlap_histogram(const CopyCatalog& catalog, const CyclicOrdering& S);
/// S = identity ordering.
OverlapHistogram overlap_histogram(const CopyCatalog& catalog);

struct FiBound {
  std::size_t i = 0;
  AuditReport report;
  /// f_i * n^(i/2); informational only.
  double scaled = 0.0;
};

/// f_i <= C(2n, i) q^i for ceil(n/3) <= i <= 2n, decided exactly.
std::vector<FiBound> check_fi_bounds(const OverlapHistogram& hist);

/// sum_{i >= k_cut} counts[i] C(w', 2n-i) / C(m-2n, 2n-i): the expected number
/// of copies J inside Y ∪ S with |J ∩ S| >= k_cut when Y is a uniform
/// w'-subset of the edges outside S. Requires 0 <= w' <= m - 2n.
Rational expected_high_overlap(const OverlapHistogram& hist, std::int64_t w_prime, std::size_t k_cut);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Simulation counterpart of expected_high_overlap.
MonteCarloEstimate expected_high_overlap_mc(const CopyCatalog& catalog, const CyclicOrdering& S,
                                            std::int64_t w_prime, std::size_t k_cut, std::size_t samples,
                                            RngStream& rng);

/// Exact check of the rational identity
///   [C(w',2n-i)/C(m-2n,2n-i)] / [C(w'+2n,2n)/C(m,2n)]
///     = (w')_{2n-i}/(w'+2n)_{2n-i} * (m)_{2n-i}/(m-2n)_{2n-i} * (m-2n+i)_i/(w'+i)_i.
/// Rejects inputs where a denominator binomial vanishes.
AuditReport check_fiand_ratio(int n, std::int64_t w_prime, int i);

}  // namespace sqham
