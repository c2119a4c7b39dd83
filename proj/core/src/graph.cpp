#include "sqham/graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sqham {

Edge make_edge(int a, int b) {
  if (a == b) throw std::invalid_argument("make_edge: loop at vertex " + std::to_string(a));
  if (a < 0 || b < 0) throw std::invalid_argument("make_edge: negative vertex");
  return a < b ? Edge{a, b} : Edge{b, a};
}

void check_vertex_count(int n) {
  if (n < 1) throw std::invalid_argument("vertex count must be positive, got " + std::to_string(n));
  if (n > kMaxVertices) {
    throw std::invalid_argument("vertex count " + std::to_string(n) + " exceeds the dense-representation ceiling of " +
                                std::to_string(kMaxVertices));
  }
}

std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2; }

std::size_t words_for(int n) { return (pair_count(n) + 63) / 64; }

std::size_t edge_index(int n, Edge e) {
  if (e.u < 0 || e.u >= e.v || e.v >= n) {
    throw std::out_of_range("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} not canonical in K_" +
                            std::to_string(n));
  }
  const auto u = static_cast<std::size_t>(e.u);
  const auto nn = static_cast<std::size_t>(n);
  return u * (2 * nn - u - 1) / 2 + static_cast<std::size_t>(e.v - e.u - 1);
}

Edge edge_at(int n, std::size_t index) {
  if (index >= pair_count(n)) throw std::out_of_range("edge index out of range");
  int u = 0;
  std::size_t row = static_cast<std::size_t>(n - 1);
  while (index >= row) {
    index -= row;
    --row;
    ++u;
  }
  return Edge{u, u + 1 + static_cast<int>(index)};
}

// EdgeSet

EdgeSet::EdgeSet(int n) : n_(n) {
  check_vertex_count(n);
  words_.assign(words_for(n), 0);
}

EdgeSet::EdgeSet(int n, std::initializer_list<Edge> edges) : EdgeSet(n) {
  for (const Edge& e : edges) insert(e);
}

EdgeSet::EdgeSet(int n, std::span<const Edge> edges) : EdgeSet(n) {
  for (const Edge& e : edges) insert(e);
}

EdgeSet EdgeSet::complete(int n) {
  EdgeSet s(n);
  const std::size_t total = pair_count(n);
  for (std::size_t i = 0; i < total; ++i) s.insert_index(i);
  return s;
}

EdgeSet EdgeSet::from_words(int n, EdgeWords words) {
  EdgeSet s(n);
  if (words.size() != s.words_.size()) throw std::invalid_argument("EdgeSet::from_words: word count mismatch");
  std::copy(words.begin(), words.end(), s.words_.begin());
  const std::size_t total = pair_count(n);
  if (total % 64 != 0 && !s.words_.empty()) {
    const std::uint64_t mask = (std::uint64_t{1} << (total % 64)) - 1;
    if ((s.words_.back() & ~mask) != 0) throw std::invalid_argument("EdgeSet::from_words: bits beyond C(n,2)");
  }
  return s;
}

bool EdgeSet::contains(Edge e) const { return contains_index(edge_index(n_, e)); }
void EdgeSet::insert(Edge e) { insert_index(edge_index(n_, e)); }
void EdgeSet::erase(Edge e) { erase_index(edge_index(n_, e)); }

std::size_t EdgeSet::size() const { return bits::popcount(words_); }

std::vector<std::size_t> EdgeSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

std::vector<Edge> EdgeSet::edges() const {
  std::vector<Edge> out;
  for (std::size_t i : indices()) out.push_back(edge_at(n_, i));
  return out;
}

void EdgeSet::check_same_universe(const EdgeSet& o) const {
  if (n_ != o.n_) throw std::invalid_argument("EdgeSet: mixing universes K_" + std::to_string(n_) + " and K_" +
                                              std::to_string(o.n_));
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  check_same_universe(other);
  return bits::subset(words_, other.words_);
}

std::size_t EdgeSet::intersection_size(const EdgeSet& other) const {
  check_same_universe(other);
  return bits::intersect_count(words_, other.words_);
}

EdgeSet& EdgeSet::operator|=(const EdgeSet& o) {
  check_same_universe(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

EdgeSet& EdgeSet::operator&=(const EdgeSet& o) {
  check_same_universe(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

EdgeSet& EdgeSet::operator-=(const EdgeSet& o) {
  check_same_universe(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

bool operator<(const EdgeSet& l, const EdgeSet& r) {
  if (l.n_ != r.n_) return l.n_ < r.n_;
  return std::lexicographical_compare(l.words_.rbegin(), l.words_.rend(), r.words_.rbegin(), r.words_.rend());
}

std::string EdgeSet::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  const std::size_t digits = std::max<std::size_t>(1, (pair_count(n_) + 3) / 4);
  out.reserve(digits);
  for (std::size_t d = digits; d-- > 0;) {
    const std::size_t bit = d * 4;
    const std::uint64_t nibble = (words_[bit >> 6] >> (bit & 63)) & 0xF;
    out.push_back(kDigits[nibble]);
  }
  return out;
}

std::string EdgeSet::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const Edge& e : edges()) {
    if (!first) os << ' ';
    os << e.u << '-' << e.v;
    first = false;
  }
  return os.str();
}

namespace bits {

bool subset(EdgeWords a, EdgeWords b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] & ~b[i]) != 0) return false;
  }
  return true;
}

std::size_t intersect_count(EdgeWords a, EdgeWords b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

std::size_t difference_count(EdgeWords a, EdgeWords b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & ~b[i]));
  return c;
}

std::size_t popcount(EdgeWords a) {
  std::size_t c = 0;
  for (std::uint64_t w : a) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

}  // namespace bits

// Graph

Graph::Graph(int n) : edges_(n), adjacency_(static_cast<std::size_t>(n), 0) {}

Graph::Graph(EdgeSet edges) : edges_(std::move(edges)), adjacency_(static_cast<std::size_t>(edges_.n()), 0) {
  for (const Edge& e : edges_.edges()) {
    adjacency_[static_cast<std::size_t>(e.u)] |= std::uint64_t{1} << e.v;
    adjacency_[static_cast<std::size_t>(e.v)] |= std::uint64_t{1} << e.u;
  }
}

int Graph::degree(int v) const { return std::popcount(adjacency_[static_cast<std::size_t>(v)]); }

void Graph::add_edge(Edge e) {
  edges_.insert(e);
  adjacency_[static_cast<std::size_t>(e.u)] |= std::uint64_t{1} << e.v;
  adjacency_[static_cast<std::size_t>(e.v)] |= std::uint64_t{1} << e.u;
}

EdgeSubsetStats stats(const EdgeSet& edges) {
  EdgeSubsetStats s;
  const int n = edges.n();
  if (n == 0) return s;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::uint64_t touched = 0;
  std::size_t merges = 0;
  for (const Edge& e : edges.edges()) {
    ++s.edges;
    touched |= (std::uint64_t{1} << e.u) | (std::uint64_t{1} << e.v);
    const int a = find(e.u);
    const int b = find(e.v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      ++merges;
    }
  }
  s.vertices = static_cast<std::size_t>(std::popcount(touched));
  s.components = s.vertices - merges;
  return s;
}

Graph sample_gnp(int n, double p, RngStream& rng) {
  check_vertex_count(n);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_gnp: p must lie in [0, 1]");
  EdgeSet edges(n);
  const std::size_t total = pair_count(n);
  for (std::size_t i = 0; i < total; ++i) {
    if (rng.bernoulli(p)) edges.insert_index(i);
  }
  return Graph(std::move(edges));
}

EdgeSet sample_subset_avoiding(const EdgeSet& excluded, std::size_t count, RngStream& rng) {
  const int n = excluded.n();
  std::vector<std::size_t> pool;
  const std::size_t total = pair_count(n);
  pool.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!excluded.contains_index(i)) pool.push_back(i);
  }
  if (count > pool.size()) {
    throw std::invalid_argument("cannot draw " + std::to_string(count) + " edges from a pool of " +
                                std::to_string(pool.size()));
  }
  // partial Fisher-Yates
  EdgeSet out(n);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    out.insert_index(pool[i]);
  }
  return out;
}

Graph sample_gnm(int n, std::size_t m, RngStream& rng) {
  check_vertex_count(n);
  if (m > pair_count(n)) {
    throw std::invalid_argument("sample_gnm: " + std::to_string(m) + " edges requested but C(n,2) = " +
                                std::to_string(pair_count(n)));
  }
  return Graph(sample_subset_avoiding(EdgeSet(n), m, rng));
}

Graph read_graph(std::istream& in) {
  long long n = 0;
  long long m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("graph file: expected header \"n m\"");
  if (n < 1 || n > kMaxVertices) throw std::runtime_error("graph file: vertex count " + std::to_string(n) + " unsupported");
  if (m < 0 || static_cast<std::size_t>(m) > pair_count(static_cast<int>(n))) {
    throw std::runtime_error("graph file: edge count " + std::to_string(m) + " impossible for n = " + std::to_string(n));
  }
  Graph g(static_cast<int>(n));
  for (long long i = 0; i < m; ++i) {
    long long u = 0;
    long long v = 0;
    if (!(in >> u >> v)) throw std::runtime_error("graph file: expected " + std::to_string(m) + " edge lines");
    if (u < 0 || v >= n || u >= v) {
      throw std::runtime_error("graph file: edge line " + std::to_string(i + 1) + " (" + std::to_string(u) + " " +
                               std::to_string(v) + ") violates 0 <= u < v < n");
    }
    const Edge e{static_cast<int>(u), static_cast<int>(v)};
    if (g.edges().contains(e)) {
      throw std::runtime_error("graph file: duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    g.add_edge(e);
  }
  std::string trailing;
  if (in >> trailing) throw std::runtime_error("graph file: trailing content after " + std::to_string(m) + " edges");
  return g;
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges().edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace sqham
