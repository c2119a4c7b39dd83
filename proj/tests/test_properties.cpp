#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "sqham/copies.hpp"
#include "sqham/exact.hpp"
#include "sqham/fragment_lab.hpp"
#include "sqham/solver.hpp"

using namespace sqham;

namespace {

const SearchBudget kBudget{10'000'000, 30.0};

}  // namespace

TEST_CASE("property: edge set algebra") {
  for (std::uint64_t c = 0; c < 200; ++c) {
    RngStream rng = gen::stream(1, c);
    const int n = gen::int_in(rng, 2, 64);
    const EdgeSet a = gen::edge_set(rng, n, rng.uniform());
    const EdgeSet b = gen::edge_set(rng, n, rng.uniform());
    CHECK((a | b).size() + (a & b).size() == a.size() + b.size());
    CHECK((a - b).size() == a.size() - a.intersection_size(b));
    CHECK((a & b).is_subset_of(a));
    CHECK(a.is_subset_of(a | b));
    CHECK(((a - b) | (a & b)) == a);
    CHECK(EdgeSet::from_words(n, a.words()) == a);
    CHECK(gen::pairs(a | b).size() == (a | b).size());
  }
}

TEST_CASE("property: subset stats are additive over vertex-disjoint unions") {
  for (std::uint64_t c = 0; c < 100; ++c) {
    RngStream rng = gen::stream(2, c);
    const int n = gen::int_in(rng, 4, 20);
    const int cut = gen::int_in(rng, 1, n - 1);
    EdgeSet left(n), right(n);
    for (const Edge& e : gen::edge_set(rng, n, 0.3).edges()) {
      if (e.v < cut) left.insert(e);
      else if (e.u >= cut) right.insert(e);
    }
    const EdgeSubsetStats l = stats(left);
    const EdgeSubsetStats r = stats(right);
    const EdgeSubsetStats both = stats(left | right);
    CHECK(both.edges == l.edges + r.edges);
    CHECK(both.components == l.components + r.components);
    CHECK(both.vertices == l.vertices + r.vertices);
    const oracle::Stats o = oracle::stats_bfs(gen::pairs(left | right));
    CHECK(both.components == o.components);
  }
}

TEST_CASE("property: extension counts shrink as the required set grows") {
  const CopyCatalog cat = enumerate_copies(8);
  for (std::uint64_t c = 0; c < 60; ++c) {
    RngStream rng = gen::stream(3, c);
    const EdgeSet host = cat.edge_set(static_cast<std::size_t>(rng.below(cat.size())));
    const EdgeSet small = gen::subset_of(rng, host, static_cast<std::size_t>(gen::int_in(rng, 0, 4)));
    EdgeSet large = small | gen::subset_of(rng, host, static_cast<std::size_t>(gen::int_in(rng, 0, 4)));
    const std::uint64_t a = extension_count(cat, small);
    const std::uint64_t b = extension_count(cat, large);
    CHECK(b <= a);
    CHECK(b >= 1);  // host contains both
    large.insert_index(static_cast<std::size_t>(rng.below(pair_count(8))));
    CHECK(extension_count(cat, large) <= b);
  }
}

TEST_CASE("property: copies are determined by their canonical ordering") {
  for (std::uint64_t c = 0; c < 100; ++c) {
    RngStream rng = gen::stream(4, c);
    const int n = gen::int_in(rng, 5, 30);
    std::vector<int> p = gen::permutation(rng, n);
    const CyclicOrdering o(p);
    std::rotate(p.begin(), p.begin() + gen::int_in(rng, 0, n - 1), p.end());
    if (rng.below(2) == 1) std::reverse(p.begin(), p.end());
    CHECK(CyclicOrdering(p) == o);
    CHECK(power_edges(CyclicOrdering(p), 2) == power_edges(o, 2));
    CHECK(power_edges(o, 2).size() == 2 * static_cast<std::size_t>(n));
  }
}

TEST_CASE("property: enlarging W never turns a good pair bad") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    RngStream rng = gen::stream(5, c);
    const int n = gen::int_in(rng, 7, 12);
    const CyclicOrdering s = gen::ordering(rng, n);
    const EdgeSet w = gen::edge_set(rng, n, 0.4 * rng.uniform());
    const EdgeSet bigger = w | gen::edge_set(rng, n, 0.3);
    const int k = gen::int_in(rng, 0, 2 * n);
    const PairClassification a = classify_pair(s, w, k, kBudget);
    const PairClassification b = classify_pair(s, bigger, k, kBudget);
    REQUIRE(a.resolved);
    REQUIRE(b.resolved);
    if (a.good) {
      CHECK(b.good);
      CHECK(*b.min_fragment_size <= *a.min_fragment_size);
    }
  }
}

TEST_CASE("property: zero fragment iff a copy lies inside W") {
  for (std::uint64_t c = 0; c < 40; ++c) {
    RngStream rng = gen::stream(6, c);
    const int n = gen::int_in(rng, 6, 8);
    const CyclicOrdering s = gen::ordering(rng, n);
    const EdgeSet w = gen::edge_set(rng, n, 0.6 + 0.4 * rng.uniform());
    const FragmentOutcome f = min_fragment(s, w, 2, 0, kBudget);
    const bool inside = oracle::contains_power(n, gen::pairs(w), 2);
    CHECK((f.status == SearchStatus::found) == inside);
    if (inside) CHECK(*f.min_size == 0);
  }
}

TEST_CASE("property: solver witnesses are real") {
  for (std::uint64_t c = 0; c < 60; ++c) {
    RngStream rng = gen::stream(7, c);
    const int n = gen::int_in(rng, 5, 20);
    const Graph g(gen::edge_set(rng, n, 0.6 + 0.4 * rng.uniform()));
    const SearchOutcome out = find_power_ham(g, 2, kBudget, rng);
    if (out.status == SearchStatus::found) CHECK(power_edges(*out.witness, 2).is_subset_of(g.edges()));
    CHECK(out.status != SearchStatus::budget_unknown);
  }
}

TEST_CASE("property: quadratic surds form a field") {
  for (std::uint64_t c = 0; c < 150; ++c) {
    RngStream rng = gen::stream(8, c);
    const std::uint64_t d = static_cast<std::uint64_t>(gen::int_in(rng, 2, 50));
    const auto r = [&] { return Rational(gen::int_in(rng, -20, 20), gen::int_in(rng, 1, 9)); };
    const QuadSurd x(r(), r(), d), y(r(), r(), d), z(r(), r(), d);
    CHECK((x + y) * z == x * z + y * z);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x - x == QuadSurd(Rational(0)));
    if (y.sign() != 0) {
      CHECK((x / y) * y == x);
    }
    const double diff = (x - y).to_double();
    if (std::abs(diff) > 1e-9) CHECK((x < y) == (diff < 0));
  }
}

TEST_CASE("property: binomial identities") {
  for (std::uint64_t c = 0; c < 100; ++c) {
    RngStream rng = gen::stream(9, c);
    const int n = gen::int_in(rng, 1, 80);
    const int k = gen::int_in(rng, 0, n);
    CHECK(binomial(n, k) == binomial(n, n - k));
    CHECK(binomial(n, k) == oracle::pascal(n, k));
    CHECK(falling(n, k) == binomial(n, k) * factorial(static_cast<unsigned>(k)));
  }
}
