#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "sqham/copies.hpp"
#include "sqham/solver.hpp"

using namespace sqham;

namespace {

Graph petersen() {
  Graph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(make_edge(i, (i + 1) % 5));
    g.add_edge(make_edge(5 + i, 5 + (i + 2) % 5));
    g.add_edge(make_edge(i, i + 5));
  }
  return g;
}

SearchOutcome solve(const Graph& g, int k = 2, std::uint64_t seed = 0, SearchOptions options = {}) {
  RngStream rng(seed, 0);
  return find_power_ham(g, k, SearchBudget{}, rng, options);
}

bool witness_ok(const Graph& g, const SearchOutcome& out, int k) {
  return out.witness && power_edges(*out.witness, k).is_subset_of(g.edges());
}

}  // namespace

TEST_CASE("solver examples") {
  const Graph h9(power_edges(CyclicOrdering::identity(9), 2));
  const SearchOutcome found = solve(h9);
  CHECK(found.status == SearchStatus::found);
  REQUIRE(found.witness);
  CHECK(power_edges(*found.witness, 2) == h9.edges());

  for (const Edge& e : h9.edges().edges()) {
    EdgeSet minus = h9.edges();
    minus.erase(e);
    CHECK(solve(Graph(minus)).status == SearchStatus::exhausted_no);
  }
  CHECK(petersen().edge_count() == 15);
  CHECK(solve(petersen()).status == SearchStatus::exhausted_no);
  CHECK(solve(Graph(EdgeSet::complete(5))).status == SearchStatus::found);
}

TEST_CASE("solver small cases and k = 1") {
  CHECK(solve(Graph(EdgeSet::complete(3)), 1).status == SearchStatus::found);
  CHECK(solve(Graph(EdgeSet(3, {{0, 1}, {1, 2}})), 1).status == SearchStatus::exhausted_no);
  const Graph c8(power_edges(CyclicOrdering({0, 5, 2, 7, 1, 4, 6, 3}), 1));
  const SearchOutcome out = solve(c8, 1);
  CHECK(out.status == SearchStatus::found);
  CHECK(witness_ok(c8, out, 1));
  CHECK(solve(Graph(EdgeSet::complete(12)), 5).status == SearchStatus::found);
  CHECK_THROWS_AS(solve(Graph(2)), std::invalid_argument);
}

TEST_CASE("dense graphs resolve quickly whatever the tie order") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RngStream rng(seed, 0);
    const SearchOutcome out = find_power_ham(Graph(EdgeSet::complete(24)), 2, SearchBudget{100000, 10.0}, rng);
    CHECK(out.status == SearchStatus::found);
  }
}

TEST_CASE("solver agrees with brute force on random graphs") {
  for (std::uint64_t c = 0; c < 150; ++c) {
    RngStream rng = gen::stream(31, c);
    const int n = gen::int_in(rng, 5, 8);
    const double p = 0.4 + 0.55 * rng.uniform();
    const Graph g(gen::edge_set(rng, n, p));
    const bool expected = oracle::contains_power(n, gen::pairs(g.edges()), 2);
    const SearchOutcome out = solve(g, 2, c);
    CHECK(out.status == (expected ? SearchStatus::found : SearchStatus::exhausted_no));
    if (expected) CHECK(witness_ok(g, out, 2));
  }
}

TEST_CASE("degree pruning never changes the decision") {
  for (std::uint64_t c = 0; c < 150; ++c) {
    RngStream rng = gen::stream(32, c);
    const int n = gen::int_in(rng, 6, 12);
    const Graph g(gen::edge_set(rng, n, 0.55 + 0.4 * rng.uniform()));
    const SearchOutcome with = solve(g, 2, c);
    const SearchOutcome without = solve(g, 2, c, SearchOptions{false});
    CHECK(with.status == without.status);
    CHECK(with.nodes_expanded <= without.nodes_expanded);
  }
}

TEST_CASE("search is deterministic given the seed") {
  RngStream rng(7, 7);
  const Graph g = sample_gnp(14, 0.7, rng);
  const SearchOutcome a = solve(g, 2, 3);
  const SearchOutcome b = solve(g, 2, 3);
  CHECK(a.status == b.status);
  CHECK(a.nodes_expanded == b.nodes_expanded);
  CHECK(a.witness == b.witness);
}

TEST_CASE("tiny budgets give unknown, never a false no") {
  RngStream g_rng(5, 1);
  for (int t = 0; t < 20; ++t) {
    const Graph g = sample_gnp(16, 0.5, g_rng);
    RngStream rng(1, 1);
    const SearchOutcome full = find_power_ham(g, 2, SearchBudget{}, rng);
    RngStream rng2(1, 1);
    const SearchOutcome cut = find_power_ham(g, 2, SearchBudget{3, 60.0}, rng2);
    if (cut.status == SearchStatus::exhausted_no) {
      CHECK(full.status == SearchStatus::exhausted_no);
    }
    if (cut.status == SearchStatus::budget_unknown) CHECK(cut.nodes_expanded <= 3);
  }
}

TEST_CASE("min_fragment examples") {
  const int n = 8;
  const CyclicOrdering S = CyclicOrdering::identity(n);
  const CyclicOrdering J({0, 3, 6, 1, 4, 7, 2, 5});
  const FragmentOutcome zero = min_fragment(S, power_edges(J, 2), 2, 2 * n, SearchBudget{});
  CHECK(zero.min_size == 0);

  const FragmentOutcome alone = min_fragment(S, EdgeSet(n), 2, 2 * n, SearchBudget{});
  CHECK(alone.status == SearchStatus::found);
  CHECK(alone.min_size == 2 * n);
  REQUIRE(alone.best);
  CHECK(*alone.best == S);

  const FragmentOutcome capped = min_fragment(S, EdgeSet(n), 2, 2 * n - 1, SearchBudget{});
  CHECK(capped.status == SearchStatus::exhausted_no);
  CHECK_FALSE(capped.min_size.has_value());
}

TEST_CASE("min_fragment matches the catalog and the oracle") {
  const int n = 8;
  const CopyCatalog cat = enumerate_copies(n);
  for (std::uint64_t c = 0; c < 60; ++c) {
    RngStream rng = gen::stream(33, c);
    const CyclicOrdering S = gen::ordering(rng, n);
    // |W| near 2 n^1.5 ~ 45 is infeasible in K_8 (m = 28), so spread W over 4..24.
    const std::size_t w = static_cast<std::size_t>(gen::int_in(rng, 4, 24));
    const EdgeSet W = sample_gnm(n, w, rng).edges();
    const int cap = gen::int_in(rng, 0, 2 * n);
    const FragmentOutcome out = min_fragment(S, W, 2, cap, SearchBudget{});
    const std::optional<int> exhaustive = min_fragment_exhaustive(cat, power_edges(S, 2), W, cap);
    CHECK(out.min_size == exhaustive);
    if (c < 15) {
      const int o = oracle::min_fragment(n, gen::pairs(power_edges(S, 2)), gen::pairs(W), cap);
      CHECK(exhaustive == (o < 0 ? std::nullopt : std::optional<int>(o)));
    }
    if (out.best) {
      const EdgeSet j = power_edges(*out.best, 2);
      CHECK(j.is_subset_of(power_edges(S, 2) | W));
      CHECK(static_cast<int>((j - W).size()) == *out.min_size);
    }
  }
}
