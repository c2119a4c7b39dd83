#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sqham/copies.hpp"
#include "sqham/exact.hpp"
#include "sqham/graph.hpp"
#include "sqham/rng.hpp"
#include "sqham/solver.hpp"
#include "sqham/stats.hpp"

namespace sqham {

/// Parameters of the two-round exposure experiment.
///
/// p0 = c0_surrogate / sqrt(n) and p1 = C / sqrt(n), so that
/// p = 1 - (1 - p0)(1 - p1). k is the fragment cutoff, w the first-round size
/// when W is drawn with a fixed number of edges.
struct TwoRoundPlan {
  int n = 0;
  double c0_surrogate = 3.0;
  double C = 1.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double p = 0.0;
  int k = 1;
  std::size_t w = 0;

  /// k defaults to ceil(4 sqrt n) and w to min(ceil(C n^1.5), C(n,2)).
  static TwoRoundPlan make(int n, double c0_surrogate, double C, std::optional<int> k = std::nullopt,
                           std::optional<std::size_t> w = std::nullopt);
  void validate() const;
};

/// ceil(4 sqrt n), computed in integers.
int default_fragment_cutoff(int n);

struct PairClassification {
  CyclicOrdering S;
  EdgeSet W;
  /// Smallest (S, W)-fragment size when it is at most k.
  std::optional<int> min_fragment_size;
  bool good = false;
  /// False when the search ran out of budget; such pairs are neither good nor
  /// bad and are kept out of censuses.
  bool resolved = true;
};

/// (S, W) is good when some copy J inside E(S) ∪ W has |J \ W| <= k.
PairClassification classify_pair(const CyclicOrdering& S, const EdgeSet& W, int k, const SearchBudget& budget);

/// The distinct fragments J \ W of size <= cap, over all copies J, for one
/// fixed W. A copy J lies inside E(S) ∪ W exactly when J \ W ⊆ E(S), so the
/// (S, W)-fragments are the indexed sets contained in E(S).
class FragmentIndex {
 public:
  FragmentIndex(const CopyCatalog& catalog, const EdgeSet& W, int cap);

  struct Hit {
    int size = 0;
    EdgeWords fragment;
  };

  /// Smallest fragment inside S, ties broken by the EdgeSet order; empty if
  /// none has size <= cap.
  std::optional<Hit> smallest_within(EdgeWords s_edges) const;
  std::size_t distinct_fragments() const { return sizes_.size(); }

 private:
  std::size_t stride_;
  std::vector<int> sizes_;
  std::vector<std::uint64_t> words_;
};

struct BadPairCensus {
  std::uint64_t trials = 0;
  std::uint64_t good = 0;
  std::uint64_t bad = 0;
  std::uint64_t unresolved = 0;
  /// Bad fraction over resolved pairs.
  ProportionEstimate bad_fraction;
  /// 2 C^(-k/3); informational since the lemma needs C above an unspecified C0.
  double lemma_bound = 0.0;
  /// Bad pairs split by t = |W ∩ E(S)|.
  std::vector<std::uint64_t> bad_by_overlap;
};

/// Draws (S, W) with S uniform over copies and W a uniform w-subset, trial t
/// using stream (master_seed, t).
BadPairCensus bad_pair_census(const CopyCatalog& catalog, const TwoRoundPlan& plan, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned threads = 1);

struct W0Census {
  std::uint64_t examined = 0;
  std::uint64_t bad = 0;
  /// 2 * bad <= |copies| (exact mode) or the estimate's bad fraction <= 1/2.
  bool successful = false;
  bool exact = true;
  ProportionEstimate bad_fraction;
};

/// Counts S with (S, W0) bad over every copy.
W0Census successful_w0(const CopyCatalog& catalog, const EdgeSet& W0, int k);
/// Estimates the same from `samples` uniformly drawn S.
W0Census successful_w0_sampled(const CopyCatalog& catalog, const EdgeSet& W0, int k, std::size_t samples,
                               RngStream& rng);

/// The k-uniform multi-hypergraph of chosen k-subsets chi(S, W0), one per good
/// pair. chi(S, W0) is the smallest fragment padded with the lexicographically
/// smallest remaining edges of S.
struct FragmentFamily {
  int n = 0;
  int k = 0;
  std::vector<EdgeSet> members;
  std::vector<std::size_t> sources;  // catalog index of S
  std::vector<EdgeSet> fragments;
  std::uint64_t examined = 0;
  std::uint64_t bad = 0;

  bool successful() const { return 2 * bad <= examined; }
};

FragmentFamily build_fragment_family(const CopyCatalog& catalog, const EdgeSet& W0, int k);

/// Re-derives every member property: k edges, inside its S, containing its
/// fragment, and the fragment being J \ W0 for a copy J inside E(S) ∪ W0.
bool verify_fragment_family(const CopyCatalog& catalog, const FragmentFamily& family, const EdgeSet& W0);

/// Exact moments of X = #{A in family : A ⊆ W1}, W1 ~ G(n, p1), compared to
/// the variance bound p1^(2k) sum_{A ∩ B nonempty} p1^(-|A ∩ B|).
///
/// p1 may be irrational (C / sqrt n), so everything exact lives in Q(sqrt d).
struct SecondMomentReport {
  std::size_t family_size = 0;
  QuadSurd mu;             // |family| p1^k
  QuadSurd exact_mean;     // sum over members of p1^|A|
  QuadSurd exact_variance; // sum_{A,B} p1^|A ∪ B| - mean^2
  QuadSurd var_bound;
  std::optional<QuadSurd> chebyshev_bound;  // Var / mu^2 when mu > 0
  /// pair_overlaps[j] = ordered pairs (A, B), A = B included, with |A ∩ B| = j.
  std::vector<std::uint64_t> pair_overlaps;

  std::size_t simulations = 0;
  double empirical_p_x0 = 0.0;
  double empirical_p_x0_sigma = 0.0;
  double empirical_mean = 0.0;

  bool variance_within_bound() const { return exact_variance <= var_bound; }
  /// empirical Pr(X = 0) <= Var / mu^2 + 4 sigma.
  bool chebyshev_consistent() const;
};

SecondMomentReport second_moment(const FragmentFamily& family, const QuadSurd& p1, std::size_t simulations,
                                 RngStream& rng);

struct PathologicalCensus {
  std::uint64_t copies_inside = 0;
  std::uint64_t bad = 0;
  HighFloat threshold;  // C^(-k/3) |copies| C(w'+2n, 2n) / C(m, 2n)
  bool pathological = false;
};

/// Counts copies S inside Z with (S, Z \ S) bad. Since every copy J inside Z
/// has J \ (Z \ S) = J ∩ E(S), the pair is bad when each such J meets S in
/// more than k edges. Requires |Z| = w' + 2n.
PathologicalCensus pathological_census(const CopyCatalog& catalog, const EdgeSet& Z, int k, double C,
                                       std::int64_t w_prime);

struct TwoRoundRecord {
  std::uint64_t trial = 0;
  std::size_t w0_size = 0;
  bool w0_successful = false;
  std::uint64_t bad_pairs = 0;
  std::size_t family_size = 0;
  std::uint64_t x = 0;
  SearchStatus solver_status = SearchStatus::budget_unknown;
  /// X > 0 implies the solver found a copy in W0 ∪ W1.
  bool sound = true;
  double seconds = 0.0;
};

/// End-to-end two-round pipeline; trial t uses stream (master_seed, t).
std::vector<TwoRoundRecord> two_round_experiment(const CopyCatalog& catalog, const TwoRoundPlan& plan,
                                                 std::uint64_t trials, std::uint64_t master_seed,
                                                 const SearchBudget& budget, unsigned threads = 1);

}  // namespace sqham
