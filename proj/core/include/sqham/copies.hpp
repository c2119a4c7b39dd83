#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sqham/exact.hpp"
#include "sqham/graph.hpp"

namespace sqham {

/// A Hamilton ordering of [n] up to rotation and reflection.
///
/// Stored canonically: order[0] == 0 and order[1] < order[n-1]. Two orderings
/// describe the same copy of a cycle power exactly when their canonical forms
/// agree.
class CyclicOrdering {
 public:
  CyclicOrdering() = default;
  /// Accepts any permutation of [n] and canonicalizes it.
  explicit CyclicOrdering(std::vector<int> order);

  static CyclicOrdering identity(int n);

  int n() const { return static_cast<int>(order_.size()); }
  std::span<const int> order() const { return order_; }
  int operator[](std::size_t i) const { return order_[i]; }

  std::string to_string() const;

  friend auto operator<=>(const CyclicOrdering&, const CyclicOrdering&) = default;

 private:
  std::vector<int> order_;
};

/// Edges of the k-th power of the cycle traced by `o`.
EdgeSet power_edges(const CyclicOrdering& o, int k);
EdgeSet power_edges(std::span<const int> cyclic_order, int n, int k);

/// |copies of the k-th power of H_n in K_n| = (n-1)!/2, independent of k.
BigInt count_copies(int n);

inline constexpr std::uint64_t kDefaultCatalogBudget = 20'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget);
  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// Throws BudgetExceeded unless (n-1)!/2 <= budget.
void check_catalog_budget(int n, std::uint64_t budget);

/// Every copy of the k-th power of H_n in K_n, with its edge set.
///
/// Copies are kept in lexicographic order of their canonical orderings, which
/// makes index_of a binary search. Edge sets are stored as one flat block of
/// words so the audit scans stay cache friendly.
class CopyCatalog {
 public:
  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return count_; }
  std::size_t words_per_set() const { return stride_; }

  CyclicOrdering ordering(std::size_t i) const;
  EdgeWords edges(std::size_t i) const { return {edge_words_.data() + i * stride_, stride_}; }
  EdgeSet edge_set(std::size_t i) const { return EdgeSet::from_words(n_, edges(i)); }

  std::optional<std::size_t> index_of(const CyclicOrdering& o) const;

  /// Number of distinct edge sets; below count only when n <= 2k + 1 or for
  /// degenerate small cases.
  std::size_t distinct_edge_sets() const;

  /// CSV columns: copy_index, ordering, edge_bitmask_hex.
  void write_csv(std::ostream& out) const;

 private:
  friend CopyCatalog enumerate_copies(int n, int k, std::uint64_t budget);

  int n_ = 0;
  int k_ = 0;
  std::size_t count_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint8_t> orders_;
  std::vector<std::uint64_t> edge_words_;
};

CopyCatalog enumerate_copies(int n, int k = 2, std::uint64_t budget = kDefaultCatalogBudget);

/// |{J in catalog : I is a subset of J}|, i.e. the size of the copy family
/// restricted to the up-set generated by I.
std::uint64_t extension_count(const CopyCatalog& catalog, const EdgeSet& required);

/// Convenience form that enumerates the catalog first.
std::uint64_t extension_count(int n, int k, const EdgeSet& required, std::uint64_t budget = kDefaultCatalogBudget);

}  // namespace sqham
