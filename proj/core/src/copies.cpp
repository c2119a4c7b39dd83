#include "sqham/copies.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace sqham {

CyclicOrdering::CyclicOrdering(std::vector<int> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  check_vertex_count(n);
  std::vector<bool> seen(order_.size(), false);
  for (int v : order_) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("CyclicOrdering: not a permutation of [n]");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
  const auto zero = std::find(order_.begin(), order_.end(), 0);
  std::rotate(order_.begin(), zero, order_.end());
  if (n >= 3 && order_[1] > order_.back()) std::reverse(order_.begin() + 1, order_.end());
}

CyclicOrdering CyclicOrdering::identity(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return CyclicOrdering(std::move(order));
}

std::string CyclicOrdering::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < order_.size(); ++i) os << (i ? " " : "") << order_[i];
  return os.str();
}

EdgeSet power_edges(std::span<const int> cyclic_order, int n, int k) {
  if (n < 3) throw std::invalid_argument("power_edges: need n >= 3");
  if (k < 1) throw std::invalid_argument("power_edges: need k >= 1");
  EdgeSet out(n);
  const int reach = std::min(k, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= reach; ++j) {
      out.insert(make_edge(cyclic_order[static_cast<std::size_t>(i)],
                           cyclic_order[static_cast<std::size_t>((i + j) % n)]));
    }
  }
  return out;
}

EdgeSet power_edges(const CyclicOrdering& o, int k) { return power_edges(o.order(), o.n(), k); }

BigInt count_copies(int n) {
  if (n < 3) throw std::invalid_argument("count_copies: need n >= 3");
  return factorial(static_cast<unsigned>(n - 1)) / 2;
}

BudgetExceeded::BudgetExceeded(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("copy catalog needs " + std::to_string(required) + " entries but the budget is " +
                         std::to_string(budget)),
      required_(required),
      budget_(budget) {}

void check_catalog_budget(int n, std::uint64_t budget) {
  const BigInt copies = count_copies(n);
  if (copies > budget) {
    const std::uint64_t required =
        copies > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                           : copies.convert_to<std::uint64_t>();
    throw BudgetExceeded(required, budget);
  }
}

CopyCatalog enumerate_copies(int n, int k, std::uint64_t budget) {
  check_vertex_count(n);
  if (n < 3) throw std::invalid_argument("enumerate_copies: need n >= 3");
  if (k < 1) throw std::invalid_argument("enumerate_copies: need k >= 1");
  check_catalog_budget(n, budget);

  CopyCatalog cat;
  cat.n_ = n;
  cat.k_ = k;
  cat.stride_ = words_for(n);
  const auto expected = count_copies(n).convert_to<std::size_t>();
  cat.orders_.reserve(expected * static_cast<std::size_t>(n));
  cat.edge_words_.reserve(expected * cat.stride_);

  std::vector<std::size_t> index_table(static_cast<std::size_t>(n * n));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v) index_table[static_cast<std::size_t>(u * n + v)] = edge_index(n, make_edge(u, v));
    }
  }
  const int reach = std::min(k, n - 1);

  // Canonical orderings are 0 followed by a permutation of 1..n-1 whose first
  // entry is below its last; next_permutation visits them in lexicographic order.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint64_t> words(cat.stride_);
  do {
    if (order[1] > order.back()) continue;
    std::fill(words.begin(), words.end(), 0);
    for (int i = 0; i < n; ++i) {
      const int a = order[static_cast<std::size_t>(i)];
      for (int j = 1; j <= reach; ++j) {
        const int b = order[static_cast<std::size_t>((i + j) % n)];
        const std::size_t idx = index_table[static_cast<std::size_t>(a * n + b)];
        words[idx >> 6] |= std::uint64_t{1} << (idx & 63);
      }
    }
    for (int v : order) cat.orders_.push_back(static_cast<std::uint8_t>(v));
    cat.edge_words_.insert(cat.edge_words_.end(), words.begin(), words.end());
    ++cat.count_;
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return cat;
}

CyclicOrdering CopyCatalog::ordering(std::size_t i) const {
  const auto first = orders_.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(n_));
  return CyclicOrdering(std::vector<int>(first, first + n_));
}

std::optional<std::size_t> CopyCatalog::index_of(const CyclicOrdering& o) const {
  if (o.n() != n_) return std::nullopt;
  std::vector<std::uint8_t> key(o.order().begin(), o.order().end());
  std::size_t lo = 0;
  std::size_t hi = count_;
  const auto row = [&](std::size_t i) { return orders_.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(n_)); };
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (std::lexicographical_compare(row(mid), row(mid) + n_, key.begin(), key.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < count_ && std::equal(row(lo), row(lo) + n_, key.begin())) return lo;
  return std::nullopt;
}

std::size_t CopyCatalog::distinct_edge_sets() const {
  std::vector<std::vector<std::uint64_t>> sets;
  sets.reserve(count_);
  for (std::size_t i = 0; i < count_; ++i) {
    const EdgeWords w = edges(i);
    sets.emplace_back(w.begin(), w.end());
  }
  std::sort(sets.begin(), sets.end());
  return static_cast<std::size_t>(std::unique(sets.begin(), sets.end()) - sets.begin());
}

void CopyCatalog::write_csv(std::ostream& out) const {
  out << "copy_index,ordering,edge_bitmask_hex\n";
  for (std::size_t i = 0; i < count_; ++i) {
    out << i << ',' << ordering(i).to_string() << ',' << edge_set(i).to_hex() << '\n';
  }
}

std::uint64_t extension_count(const CopyCatalog& catalog, const EdgeSet& required) {
  if (required.n() != catalog.n()) throw std::invalid_argument("extension_count: vertex count mismatch");
  const EdgeWords need = required.words();
  std::uint64_t count = 0;
  if (catalog.words_per_set() == 2) {
    const std::uint64_t a0 = need[0];
    const std::uint64_t a1 = need[1];
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const EdgeWords w = catalog.edges(i);
      count += ((a0 & ~w[0]) | (a1 & ~w[1])) == 0;
    }
    return count;
  }
  for (std::size_t i = 0; i < catalog.size(); ++i) count += bits::subset(need, catalog.edges(i));
  return count;
}

std::uint64_t extension_count(int n, int k, const EdgeSet& required, std::uint64_t budget) {
  return extension_count(enumerate_copies(n, k, budget), required);
}

}  // namespace sqham
