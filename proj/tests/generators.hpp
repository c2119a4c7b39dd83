#pragma once

// Seeded generators for property tests. Each case draws from its own stream,
// so a failing case is reproduced by its index alone.

#include <algorithm>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "sqham/copies.hpp"
#include "sqham/graph.hpp"
#include "sqham/rng.hpp"

namespace gen {

inline constexpr std::uint64_t kPropertySeed = 0x5eed'0f'7e57ULL;

inline sqham::RngStream stream(std::uint64_t property, std::uint64_t case_index) {
  return sqham::RngStream(kPropertySeed ^ property, case_index);
}

inline int int_in(sqham::RngStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

inline std::vector<int> permutation(sqham::RngStream& rng, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[static_cast<std::size_t>(rng.below(i))]);
  return p;
}

inline sqham::CyclicOrdering ordering(sqham::RngStream& rng, int n) { return sqham::CyclicOrdering(permutation(rng, n)); }

inline sqham::EdgeSet edge_set(sqham::RngStream& rng, int n, double density) {
  sqham::EdgeSet s(n);
  for (std::size_t i = 0; i < sqham::pair_count(n); ++i) {
    if (rng.uniform() < density) s.insert_index(i);
  }
  return s;
}

// A random subset of `from` with exactly `size` members.
inline sqham::EdgeSet subset_of(sqham::RngStream& rng, const sqham::EdgeSet& from, std::size_t size) {
  std::vector<std::size_t> items = from.indices();
  sqham::EdgeSet s(from.n());
  for (std::size_t i = 0; i < size && i < items.size(); ++i) {
    std::swap(items[i], items[i + static_cast<std::size_t>(rng.below(items.size() - i))]);
    s.insert_index(items[i]);
  }
  return s;
}

inline oracle::PairSet pairs(const sqham::EdgeSet& s) {
  oracle::PairSet out;
  for (const sqham::Edge& e : s.edges()) out.insert({e.u, e.v});
  return out;
}

inline sqham::EdgeSet from_pairs(int n, const oracle::PairSet& p) {
  sqham::EdgeSet s(n);
  for (const auto& [u, v] : p) s.insert(sqham::make_edge(u, v));
  return s;
}

}  // namespace gen
