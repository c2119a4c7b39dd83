#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "sqham/copies.hpp"
#include "sqham/spread_audit.hpp"

using namespace sqham;
namespace mp = boost::multiprecision;

TEST_CASE("q from its defining power") {
  for (int n : {7, 10, 20}) {
    const SpreadParams p = spread_params(n);
    CHECK(p.q_pow_2n == Rational(BigInt(2), oracle::factorial(n - 1)));
    const HighFloat back = mp::pow(p.q, 2 * n) - to_high(p.q_pow_2n);
    CHECK(mp::abs(back) < HighFloat("1e-40") * to_high(p.q_pow_2n));
  }
  CHECK(spread_params(7).q.convert_to<double>() == doctest::Approx(0.65676).epsilon(1e-4));
}

TEST_CASE("local spread profile examples") {
  RngStream rng(0, 0);
  const std::size_t one[] = {1};
  const std::size_t zero_and_one[] = {0, 1};

  const auto p7 = local_spread_profile(enumerate_copies(7), zero_and_one, ProfileMode::exhaustive, 0, rng);
  REQUIRE(p7.size() == 1);
  CHECK(p7[0].size == 1);
  CHECK(p7[0].max_ratio == Rational(240, 360));
  CHECK_FALSE(p7[0].within_q);  // 2/3 > q(7): reported, not asserted

  const auto p10 = local_spread_profile(enumerate_copies(10), one, ProfileMode::exhaustive, 0, rng);
  CHECK(p10[0].max_ratio == Rational(4, 9));
  CHECK(p10[0].within_q);
}

TEST_CASE("single-edge local spread is 4/(n-1)") {
  RngStream rng(1, 0);
  const std::size_t one[] = {1};
  for (int n : {7, 8, 9}) {
    const auto rows = local_spread_profile(enumerate_copies(n), one, ProfileMode::exhaustive, 0, rng);
    CHECK(rows[0].max_ratio == Rational(4, n - 1));
    CHECK(rows[0].within_q == (n >= 8));
  }
}

TEST_CASE("sampled spread profile keeps samples") {
  RngStream rng(2, 0);
  const std::size_t sizes[] = {2, 3};
  const auto rows = local_spread_profile(enumerate_copies(8), sizes, ProfileMode::sampled, 50, rng);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.samples.size() == 50);
    CHECK(r.instances == 50);
  }
}

TEST_CASE("prop easy examples") {
  const CopyCatalog c7 = enumerate_copies(7);
  const AuditReport single = check_prop_easy(c7, EdgeSet(7, {{0, 1}}));
  CHECK(single.lhs == 240);
  CHECK(*single.rhs_exact == 1920);
  CHECK(single.holds);

  const CopyCatalog c9 = enumerate_copies(9);
  const AuditReport empty = check_prop_easy(c9, EdgeSet(9));
  CHECK(empty.lhs == 20160);
  CHECK(*empty.rhs_exact == 40320);
  CHECK(empty.holds);

  CHECK_THROWS_AS(check_prop_easy(c7, EdgeSet(7, {{0, 1}, {1, 2}, {2, 3}})), std::invalid_argument);
}

TEST_CASE("prop easy exhaustive at n = 9") {
  const auto reports = audit_prop_easy(enumerate_copies(9), 3);
  // subsets of an 18-edge copy with at most 3 edges
  CHECK(reports.size() == 1 + 18 + 153 + 816);
  for (const auto& r : reports) CHECK(r.holds);
}

TEST_CASE("subgraph census matches brute force") {
  for (std::uint64_t c = 0; c < 20; ++c) {
    RngStream rng = gen::stream(41, c);
    const EdgeSet host = power_edges(CyclicOrdering::identity(8), 2);
    const EdgeSet F = gen::subset_of(rng, host, static_cast<std::size_t>(gen::int_in(rng, 1, 9)));
    const SubgraphCensus census = census_subgraphs(F);
    const oracle::PairSet f_pairs = gen::pairs(F);
    const std::vector<oracle::Pair> items(f_pairs.begin(), f_pairs.end());
    for (std::size_t l = 0; l <= census.h; ++l) {
      std::vector<std::uint64_t> by_c(census.h + 1, 0);
      oracle::for_each_combination(items, l, [&](const oracle::PairSet& s) { ++by_c[oracle::stats_bfs(s).components]; });
      for (std::size_t comp = 0; comp <= census.h; ++comp) CHECK(census.counts[l][comp] == by_c[comp]);
    }
  }
}

TEST_CASE("prop easy2 examples") {
  const EdgeSet path(6, {{0, 1}, {1, 2}, {2, 3}});
  const AuditReport r = check_prop_easy2(path, 1, 1);
  CHECK(r.lhs == 3);
  CHECK(r.holds);
  const AuditReport whole = check_prop_easy2(path, 3, 1);
  CHECK(whole.lhs == 1);
  CHECK(whole.holds);

  const auto items = power_edges(CyclicOrdering::identity(8), 2).indices();
  EdgeSet F(8);
  for (std::size_t i = 0; i < 10; ++i) F.insert_index(items[i]);
  for (const auto& rep : audit_prop_easy2(F)) CHECK(rep.holds);
  CHECK_THROWS_AS(census_subgraphs(EdgeSet::complete(7)), BudgetExceeded);
}

TEST_CASE("connected subgraph counts match brute force") {
  const Graph h9(power_edges(CyclicOrdering::identity(9), 2));
  for (std::size_t h = 1; h <= 4; ++h) {
    CHECK(count_connected_subgraphs(h9, 0, h) == oracle::connected_subgraphs_with(gen::pairs(h9.edges()), 0, h));
  }
  RngStream rng(3, 3);
  for (int t = 0; t < 10; ++t) {
    const Graph g = sample_gnp(8, 0.4, rng);
    const int root = static_cast<int>(rng.below(8));
    for (std::size_t h = 1; h <= 4; ++h) {
      CHECK(count_connected_subgraphs(g, root, h) == oracle::connected_subgraphs_with(gen::pairs(g.edges()), root, h));
    }
  }
}

TEST_CASE("tree lemma examples") {
  const Graph c10(power_edges(CyclicOrdering::identity(10), 1));
  const AuditReport cyc = check_tree_lemma(c10, 4, 2);
  CHECK(cyc.lhs == 3);
  CHECK(cyc.holds);
  const Graph h9(power_edges(CyclicOrdering::identity(9), 2));
  CHECK(check_tree_lemma(h9, 0, 4).holds);
  CHECK_THROWS_AS(check_tree_lemma(h9, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(check_tree_lemma(h9, 0, 8), BudgetExceeded);
}

TEST_CASE("rooted subtree enumeration") {
  CHECK(enumerate_rooted_subtrees(2, 3) == 5);
  CHECK(rooted_subtree_formula(2, 3) == 5);
  for (int b = 1; b <= 4; ++b) {
    for (int v = 1; v <= 5; ++v) {
      CHECK(enumerate_rooted_subtrees(b, v) == oracle::rooted_subtrees(b, v));
      CHECK(check_subtree_formula(b, v).holds);
    }
  }
}

TEST_CASE("ivc examples") {
  const CyclicOrdering s9 = CyclicOrdering::identity(9);
  const AuditReport path = check_ivc(s9, EdgeSet(9, {{0, 1}, {1, 2}}));
  CHECK(path.lhs == 2);
  CHECK(*path.rhs_exact == 3);
  const AuditReport tight = check_ivc(s9, EdgeSet(9, {{3, 4}}));
  CHECK(tight.lhs == *tight.rhs_exact);
  CHECK(tight.holds);
  CHECK_THROWS_AS(check_ivc(s9, EdgeSet(9, {{0, 4}})), std::invalid_argument);
  CHECK_THROWS_AS(check_ivc(s9, EdgeSet(9, {{0, 1}, {1, 2}, {2, 3}, {3, 4}})), std::invalid_argument);
  for (const auto& r : audit_ivc(12, 4)) CHECK(r.holds);
}

TEST_CASE("overlap histogram at n = 7") {
  const OverlapHistogram h = overlap_histogram(enumerate_copies(7));
  CHECK(h.total == 360);
  for (std::size_t i = 0; i < 7; ++i) CHECK(h.f(i) == 0);
  CHECK(h.f(14) == Rational(1, 360));
  CHECK(h.sum() == 1);
  const std::vector<std::uint64_t> expected = {0, 0, 0, 0, 0, 0, 0, 23, 70, 112, 91, 49, 14, 0, 1};
  CHECK(h.counts == expected);
}

TEST_CASE("overlap histogram matches the oracle and does not depend on S") {
  for (int n : {7, 8}) {
    const CopyCatalog cat = enumerate_copies(n);
    RngStream rng(n, 0);
    const std::vector<int> p = gen::permutation(rng, n);
    const OverlapHistogram a = overlap_histogram(cat);
    const OverlapHistogram b = overlap_histogram(cat, CyclicOrdering(p));
    CHECK(a.counts == b.counts);
    CHECK(a.counts == oracle::overlap_counts(n, p));
  }
}

TEST_CASE("f_i bounds") {
  const auto b10 = check_fi_bounds(overlap_histogram(enumerate_copies(10)));
  REQUIRE(b10.back().i == 20);
  CHECK(b10.back().report.lhs == Rational(BigInt(2), oracle::factorial(9)));
  CHECK(b10.back().report.holds);  // tight: f_20 = q^20
  CHECK(b10.front().i == 4);
  for (const auto& b : b10) CHECK(b.report.holds);

  const auto b7 = check_fi_bounds(overlap_histogram(enumerate_copies(7)));
  CHECK(b7.front().i == 3);
  bool saw_seven = false;
  for (const auto& b : b7) saw_seven = saw_seven || b.i == 7;
  CHECK(saw_seven);
}

TEST_CASE("expected high overlap boundary values") {
  const CopyCatalog cat = enumerate_copies(8);
  const OverlapHistogram h = overlap_histogram(cat);
  const std::int64_t free_edges = 28 - 16;
  CHECK(expected_high_overlap(h, 5, 17) == 0);
  // With w' = m - 2n, Y ∪ S = M and every copy is counted.
  CHECK(expected_high_overlap(h, free_edges, 0) == 2520);
  CHECK(expected_high_overlap(h, 0, 0) == 1);
  CHECK_THROWS_AS(expected_high_overlap(h, free_edges + 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(expected_high_overlap(h, -1, 0), std::invalid_argument);
}

TEST_CASE("expected high overlap equals the sum of containment probabilities") {
  const int n = 8;
  const CopyCatalog cat = enumerate_copies(n);
  const OverlapHistogram h = overlap_histogram(cat);
  const EdgeSet s = power_edges(CyclicOrdering::identity(n), 2);
  const std::int64_t free_edges = 12;
  for (std::int64_t w = 0; w <= free_edges; w += 3) {
    Rational direct = 0;
    for (std::size_t j = 0; j < cat.size(); ++j) {
      const auto outside = static_cast<std::int64_t>(bits::difference_count(cat.edges(j), s.words()));
      direct += Rational(binomial(free_edges - outside, w - outside), binomial(free_edges, w));
    }
    CHECK(expected_high_overlap(h, w, 0) == direct);
  }
}

TEST_CASE("expected high overlap agrees with Monte Carlo") {
  const int n = 8;
  const CopyCatalog cat = enumerate_copies(n);
  const OverlapHistogram h = overlap_histogram(cat);
  RngStream rng(12, 0);
  for (std::size_t k_cut : {0U, 8U, 12U}) {
    const auto est = expected_high_overlap_mc(cat, CyclicOrdering::identity(n), 8, k_cut, 20000, rng);
    const double exact = to_double(expected_high_overlap(h, 8, k_cut));
    CHECK(std::abs(est.mean - exact) <= 4 * est.std_error + 1e-12);
  }
}

TEST_CASE("fiand identity examples") {
  CHECK(check_fiand_ratio(8, 64, 12).holds);
  CHECK(check_fiand_ratio(10, 100, 13).holds);
  const AuditReport top = check_fiand_ratio(9, 20, 18);
  CHECK(top.holds);
  CHECK(top.lhs == Rational(binomial(36, 18), binomial(38, 18)));
  CHECK_THROWS_AS(check_fiand_ratio(8, 10, 17), std::invalid_argument);
  CHECK_THROWS_AS(check_fiand_ratio(8, 10, 3), std::invalid_argument);  // C(12, 13) vanishes
  CHECK_THROWS_AS(check_fiand_ratio(8, -1, 10), std::invalid_argument);
}
