#include "sqham/solver.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <limits>

namespace sqham {

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found:
      return "found";
    case SearchStatus::exhausted_no:
      return "exhausted_no";
    case SearchStatus::budget_unknown:
      return "budget_unknown";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

std::uint64_t all_vertices(int n) { return n == 64 ? ~std::uint64_t{0} : bit(n) - 1; }

int min_degree_vertex(std::span<const std::uint64_t> adj) {
  int best = 0;
  for (int v = 1; v < static_cast<int>(adj.size()); ++v) {
    if (std::popcount(adj[static_cast<std::size_t>(v)]) < std::popcount(adj[static_cast<std::size_t>(best)])) best = v;
  }
  return best;
}

// Sequence search shared by the containment and fragment problems. With
// `costed` set, each placed edge outside W (free_adj) costs one and the search
// minimizes total cost subject to cost <= cap.
class SequenceSearch {
 public:
  SequenceSearch(std::vector<std::uint64_t> adj, int k, const SearchBudget& budget, bool prune,
                 std::vector<std::uint64_t> priority)
      : n_(static_cast<int>(adj.size())),
        reach_(std::min(k, n_ - 1)),
        need_degree_(std::min(2 * k, n_ - 1)),
        adj_(std::move(adj)),
        priority_(std::move(priority)),
        budget_(budget),
        prune_(prune),
        start_(Clock::now()) {}

  void set_costs(std::vector<std::uint64_t> free_adj, int cap) {
    costed_ = true;
    free_adj_ = std::move(free_adj);
    cap_ = cap;
  }

  void run() {
    if (prune_) {
      for (std::uint64_t row : adj_) {
        if (std::popcount(row) < need_degree_) return;
      }
    }
    const int first = min_degree_vertex(adj_);
    seq_[0] = first;
    used_ = bit(first);
    place(1, 0);
  }

  bool aborted() const { return aborted_; }
  bool found() const { return best_cost_ != kNone; }
  int best_cost() const { return best_cost_; }
  std::uint64_t nodes() const { return nodes_; }
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  CyclicOrdering witness() const { return CyclicOrdering(best_seq_); }

 private:
  static constexpr int kNone = std::numeric_limits<int>::max();

  std::uint64_t partners(int i) const {
    std::uint64_t mask = 0;
    for (int j = std::max(0, i - reach_); j < i; ++j) mask |= bit(seq_[static_cast<std::size_t>(j)]);
    for (int j = 0; j <= i + reach_ - n_; ++j) mask |= bit(seq_[static_cast<std::size_t>(j)]);
    return mask;
  }

  bool out_of_budget() {
    if (nodes_ >= budget_.node_limit) return true;
    if ((nodes_ & 1023U) == 0 &&
        std::chrono::duration<double>(Clock::now() - start_).count() > budget_.time_limit) {
      return true;
    }
    return false;
  }

  // Every unplaced vertex needs need_degree_ neighbours among vertices that can
  // still sit next to it: unplaced ones, the last reach_ placed, and the first
  // reach_ placed (through the wrap).
  bool degrees_feasible(int placed) const {
    const std::uint64_t all = all_vertices(n_);
    const std::uint64_t unplaced = all & ~used_;
    std::uint64_t window = 0;
    for (int j = std::max(0, placed - reach_); j < placed; ++j) window |= bit(seq_[static_cast<std::size_t>(j)]);
    for (int j = 0; j < std::min(reach_, placed); ++j) window |= bit(seq_[static_cast<std::size_t>(j)]);
    const std::uint64_t pool = unplaced | window;
    for (std::uint64_t rest = unplaced; rest != 0; rest &= rest - 1) {
      const int u = std::countr_zero(rest);
      if (std::popcount(adj_[static_cast<std::size_t>(u)] & pool & ~bit(u)) < need_degree_) return false;
    }
    return true;
  }

  // The last slot takes a vertex above seq_[1] adjacent to the first reach_
  // vertices; some unplaced vertex must still qualify.
  bool closable(int placed) const {
    if (placed < 2 || placed >= n_) return true;
    std::uint64_t last = all_vertices(n_) & ~used_ & ~((bit(seq_[1]) << 1) - 1);
    for (int j = 0; j < std::min(reach_, placed); ++j) last &= adj_[static_cast<std::size_t>(seq_[static_cast<std::size_t>(j)])];
    return last != 0;
  }

  // Returns true when the whole search should stop.
  bool place(int i, int cost) {
    if (i == n_) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_seq_.assign(seq_.begin(), seq_.begin() + n_);
      }
      return !costed_ || best_cost_ == 0;
    }
    const std::uint64_t need = partners(i);
    std::uint64_t cand = all_vertices(n_) & ~used_;
    for (std::uint64_t rest = need; rest != 0; rest &= rest - 1) cand &= adj_[static_cast<std::size_t>(std::countr_zero(rest))];
    if (i == n_ - 1 && n_ >= 3) cand &= ~((bit(seq_[1]) << 1) - 1);
    if (cand == 0) return false;

    // Look-ahead mask for the slot after this one, ignoring the wrap.
    std::uint64_t next_common = all_vertices(n_) & ~used_;
    for (int j = std::max(0, i + 1 - reach_); j < i; ++j) next_common &= adj_[static_cast<std::size_t>(seq_[static_cast<std::size_t>(j)])];

    struct Choice {
      int vertex;
      int cost;
      int score;
      std::uint64_t tie;
    };
    std::array<Choice, kMaxVertices> choices{};
    int count = 0;
    for (std::uint64_t rest = cand; rest != 0; rest &= rest - 1) {
      const int c = std::countr_zero(rest);
      const int c_cost = costed_ ? std::popcount(need & ~free_adj_[static_cast<std::size_t>(c)]) : 0;
      const int score = std::popcount(next_common & adj_[static_cast<std::size_t>(c)] & ~bit(c));
      choices[static_cast<std::size_t>(count++)] = Choice{c, c_cost, score, priority_[static_cast<std::size_t>(c)]};
    }
    std::sort(choices.begin(), choices.begin() + count, [](const Choice& a, const Choice& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.score != b.score) return a.score < b.score;
      return a.tie < b.tie;
    });

    for (int idx = 0; idx < count; ++idx) {
      const Choice& ch = choices[static_cast<std::size_t>(idx)];
      const int total = cost + ch.cost;
      if (costed_ && (total > cap_ || total >= best_cost_)) continue;
      if (out_of_budget()) {
        aborted_ = true;
        return true;
      }
      ++nodes_;
      seq_[static_cast<std::size_t>(i)] = ch.vertex;
      used_ |= bit(ch.vertex);
      bool stop = false;
      if (closable(i + 1) && (!prune_ || degrees_feasible(i + 1))) stop = place(i + 1, total);
      used_ &= ~bit(ch.vertex);
      if (stop) return true;
    }
    return false;
  }

  int n_;
  int reach_;
  int need_degree_;
  std::vector<std::uint64_t> adj_;
  std::vector<std::uint64_t> priority_;
  SearchBudget budget_;
  bool prune_;
  Clock::time_point start_;

  bool costed_ = false;
  std::vector<std::uint64_t> free_adj_;
  int cap_ = 0;

  std::array<int, kMaxVertices> seq_{};
  std::uint64_t used_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  int best_cost_ = kNone;
  std::vector<int> best_seq_;
};

std::vector<std::uint64_t> adjacency_rows(const Graph& g) {
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) rows[static_cast<std::size_t>(v)] = g.neighbours(v);
  return rows;
}

}  // namespace

SearchOutcome find_power_ham(const Graph& g, int k, const SearchBudget& budget, RngStream& rng,
                             const SearchOptions& options) {
  if (g.n() < 3) throw std::invalid_argument("find_power_ham: need n >= 3");
  if (k < 1) throw std::invalid_argument("find_power_ham: need k >= 1");
  std::vector<std::uint64_t> priority(static_cast<std::size_t>(g.n()));
  for (auto& p : priority) p = rng();

  SequenceSearch search(adjacency_rows(g), k, budget, options.degree_pruning, std::move(priority));
  search.run();

  SearchOutcome out;
  out.nodes_expanded = search.nodes();
  out.seconds = search.seconds();
  if (search.found()) {
    out.status = SearchStatus::found;
    out.witness = search.witness();
  } else {
    out.status = search.aborted() ? SearchStatus::budget_unknown : SearchStatus::exhausted_no;
  }
  return out;
}

FragmentOutcome min_fragment(const CyclicOrdering& S, const EdgeSet& W, int k, int cap, const SearchBudget& budget,
                             const SearchOptions& options) {
  if (S.n() != W.n()) throw std::invalid_argument("min_fragment: S and W live on different vertex sets");
  if (cap < 0) throw std::invalid_argument("min_fragment: negative cap");
  const Graph host(power_edges(S, k) | W);
  const Graph free_edges(W);

  // Deterministic tie order: vertex label.
  std::vector<std::uint64_t> priority(static_cast<std::size_t>(S.n()));
  for (std::size_t v = 0; v < priority.size(); ++v) priority[v] = v;

  SequenceSearch search(adjacency_rows(host), k, budget, options.degree_pruning, std::move(priority));
  search.set_costs(adjacency_rows(free_edges), cap);
  search.run();

  FragmentOutcome out;
  out.nodes_expanded = search.nodes();
  out.seconds = search.seconds();
  if (search.aborted() && search.best_cost() != 0) {
    out.status = SearchStatus::budget_unknown;
  } else if (search.found()) {
    out.status = SearchStatus::found;
    out.min_size = search.best_cost();
    out.best = search.witness();
  } else {
    out.status = SearchStatus::exhausted_no;
  }
  return out;
}

std::optional<int> min_fragment_exhaustive(const CopyCatalog& catalog, const EdgeSet& S_edges, const EdgeSet& W,
                                           int cap) {
  const EdgeSet host = S_edges | W;
  std::optional<int> best;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const EdgeWords j = catalog.edges(i);
    if (!bits::subset(j, host.words())) continue;
    const int size = static_cast<int>(bits::difference_count(j, W.words()));
    if (size <= cap && (!best || size < *best)) best = size;
  }
  return best;
}

}  // namespace sqham
