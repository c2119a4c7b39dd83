#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sqham/rng.hpp"

namespace sqham {

/// Ceiling on n for the dense representation; adjacency rows are one word.
inline constexpr int kMaxVertices = 64;

using EdgeWords = std::span<const std::uint64_t>;

/// An edge {u, v} of K_n with u < v. Ordered lexicographically.
struct Edge {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Canonical edge from two distinct endpoints in either order.
Edge make_edge(int a, int b);

void check_vertex_count(int n);
std::size_t pair_count(int n);  // C(n, 2)
std::size_t words_for(int n);
std::size_t edge_index(int n, Edge e);
Edge edge_at(int n, std::size_t index);

/// Subset of E(K_n) stored as a bitmask over the lexicographic edge index.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(int n);
  EdgeSet(int n, std::initializer_list<Edge> edges);
  EdgeSet(int n, std::span<const Edge> edges);

  static EdgeSet complete(int n);
  static EdgeSet from_words(int n, EdgeWords words);

  int n() const { return n_; }
  std::size_t universe_size() const { return pair_count(n_); }

  bool contains(Edge e) const;
  bool contains_index(std::size_t index) const { return (words_[index >> 6] >> (index & 63)) & 1U; }
  void insert(Edge e);
  void erase(Edge e);
  void insert_index(std::size_t index) { words_[index >> 6] |= std::uint64_t{1} << (index & 63); }
  void erase_index(std::size_t index) { words_[index >> 6] &= ~(std::uint64_t{1} << (index & 63)); }

  std::size_t size() const;
  bool empty() const { return size() == 0; }

  /// Members in lexicographic order.
  std::vector<Edge> edges() const;
  std::vector<std::size_t> indices() const;
  EdgeWords words() const { return words_; }

  bool is_subset_of(const EdgeSet& other) const;
  std::size_t intersection_size(const EdgeSet& other) const;

  EdgeSet& operator|=(const EdgeSet& o);
  EdgeSet& operator&=(const EdgeSet& o);
  EdgeSet& operator-=(const EdgeSet& o);
  friend EdgeSet operator|(EdgeSet l, const EdgeSet& r) { return l |= r; }
  friend EdgeSet operator&(EdgeSet l, const EdgeSet& r) { return l &= r; }
  friend EdgeSet operator-(EdgeSet l, const EdgeSet& r) { return l -= r; }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
  /// Total order for sorting and deduplication; not set inclusion.
  friend bool operator<(const EdgeSet& l, const EdgeSet& r);

  /// Hex of the bitmask, most significant word first; bit i is edge index i.
  std::string to_hex() const;
  /// "01 12 34" style listing, mainly for diagnostics.
  std::string to_string() const;

 private:
  void check_same_universe(const EdgeSet& o) const;

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Word-level kernels used in the catalog scans.
namespace bits {
bool subset(EdgeWords a, EdgeWords b);
std::size_t intersect_count(EdgeWords a, EdgeWords b);
/// |a \ b|
std::size_t difference_count(EdgeWords a, EdgeWords b);
std::size_t popcount(EdgeWords a);
}  // namespace bits

/// Simple graph on [n] with one adjacency word per vertex.
class Graph {
 public:
  explicit Graph(int n);
  explicit Graph(EdgeSet edges);

  int n() const { return edges_.n(); }
  const EdgeSet& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::uint64_t neighbours(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  int degree(int v) const;
  bool adjacent(int u, int v) const { return (adjacency_[static_cast<std::size_t>(u)] >> v) & 1U; }
  void add_edge(Edge e);

  friend bool operator==(const Graph& l, const Graph& r) { return l.edges_ == r.edges_; }

 private:
  EdgeSet edges_;
  std::vector<std::uint64_t> adjacency_;
};

/// (edge count, component count, vertex count) of the graph spanned by a set
/// of edges; the vertices are exactly the endpoints.
struct EdgeSubsetStats {
  std::size_t edges = 0;
  std::size_t components = 0;
  std::size_t vertices = 0;
  friend bool operator==(const EdgeSubsetStats&, const EdgeSubsetStats&) = default;
};

EdgeSubsetStats stats(const EdgeSet& edges);

/// G(n, p): every edge independently, visited in lexicographic order.
Graph sample_gnp(int n, double p, RngStream& rng);
/// G(n, m): uniform m-subset of E(K_n).
Graph sample_gnm(int n, std::size_t m, RngStream& rng);
/// Uniform `count`-subset of the complement of `excluded` within E(K_n).
EdgeSet sample_subset_avoiding(const EdgeSet& excluded, std::size_t count, RngStream& rng);

/// Text format: "n m" then m lines "u v" with 0 <= u < v < n.
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);

}  // namespace sqham
