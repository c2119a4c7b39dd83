#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sqham/copies.hpp"
#include "sqham/graph.hpp"
#include "sqham/rng.hpp"

namespace sqham {

struct SearchBudget {
  std::uint64_t node_limit = 200'000'000;
  double time_limit = 60.0;  // wall seconds
};

enum class SearchStatus { found, exhausted_no, budget_unknown };

std::string_view to_string(SearchStatus s);

struct SearchOutcome {
  SearchStatus status = SearchStatus::budget_unknown;
  std::optional<CyclicOrdering> witness;
  std::uint64_t nodes_expanded = 0;
  double seconds = 0.0;
};

struct SearchOptions {
  /// Static minimum-degree rejection plus the per-node check that every
  /// unplaced vertex can still collect 2k neighbours. Never changes answers.
  bool degree_pruning = true;
};

/// Exact search for a spanning k-th power of a Hamilton cycle in `g`.
///
/// Builds the cyclic sequence one vertex at a time; a new vertex must be
/// adjacent to the previous k and, near the end, to the first vertices it wraps
/// onto. The sequence starts at a minimum-degree vertex and the reflection is
/// broken by requiring order[1] < order[n-1], so each copy is reached once.
/// Candidates are tried fail-first (fewest surviving candidates for the next
/// slot) with ties ordered by `rng`.
SearchOutcome find_power_ham(const Graph& g, int k, const SearchBudget& budget, RngStream& rng,
                             const SearchOptions& options = {});

struct FragmentOutcome {
  /// found: min_size holds the minimum (<= cap). exhausted_no: every
  /// fragment exceeds cap. budget_unknown: search cut short.
  SearchStatus status = SearchStatus::budget_unknown;
  std::optional<int> min_size;
  /// A copy J attaining min_size.
  std::optional<CyclicOrdering> best;
  std::uint64_t nodes_expanded = 0;
  double seconds = 0.0;
};

/// min |E(J) \ W| over copies J with E(J) contained in E(S) u W, when that
/// minimum is at most `cap`. Branch and bound on the same sequence search,
/// pruning on the running count of edges outside W.
FragmentOutcome min_fragment(const CyclicOrdering& S, const EdgeSet& W, int k, int cap, const SearchBudget& budget,
                             const SearchOptions& options = {});

/// Cross-check mode: the same quantity by scanning every copy in the catalog.
std::optional<int> min_fragment_exhaustive(const CopyCatalog& catalog, const EdgeSet& S_edges, const EdgeSet& W,
                                           int cap);

}  // namespace sqham
