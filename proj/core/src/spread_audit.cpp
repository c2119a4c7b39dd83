#include "sqham/spread_audit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace sqham {

namespace mp = boost::multiprecision;

namespace {

std::string describe(const EdgeSet& s) { return "{" + s.to_string() + "}"; }

// Calls fn on every size-`size` subset of `items`, as an EdgeSet on n vertices.
void for_each_subset(int n, const std::vector<std::size_t>& items, std::size_t size,
                     const std::function<void(const EdgeSet&)>& fn) {
  if (size > items.size()) return;
  std::vector<std::size_t> pick(size);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    EdgeSet s(n);
    for (std::size_t p : pick) s.insert_index(items[p]);
    fn(s);
    // next combination
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == items.size() - size + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::size_t ceil_half(std::size_t x) { return (x + 1) / 2; }

void require_square(const CopyCatalog& catalog, const char* what) {
  if (catalog.k() != 2) throw std::invalid_argument(std::string(what) + ": needs the square-cycle catalog (k = 2)");
}

}  // namespace

std::string AuditReport::lhs_text() const { return to_decimal(lhs); }

SpreadParams spread_params(int n) {
  if (n < 3) throw std::invalid_argument("spread_params: need n >= 3");
  SpreadParams p;
  p.n = n;
  p.q_pow_2n = Rational(BigInt(2), factorial(static_cast<unsigned>(n - 1)));
  p.q = mp::pow(to_high(p.q_pow_2n), HighFloat(1) / HighFloat(2 * n));
  return p;
}

bool within_power_of_q(const Rational& ratio, std::size_t size, const SpreadParams& params) {
  return pow(ratio, static_cast<unsigned>(2 * params.n)) <= pow(params.q_pow_2n, static_cast<unsigned>(size));
}

std::vector<SpreadProfileRow> local_spread_profile(const CopyCatalog& catalog, std::span<const std::size_t> sizes,
                                                   ProfileMode mode, std::size_t samples, RngStream& rng) {
  require_square(catalog, "local_spread_profile");
  const int n = catalog.n();
  const SpreadParams params = spread_params(n);
  const EdgeSet base = power_edges(CyclicOrdering::identity(n), 2);
  const std::vector<std::size_t> base_items = base.indices();
  const auto total = static_cast<std::uint64_t>(catalog.size());

  std::vector<SpreadProfileRow> rows;
  for (std::size_t size : sizes) {
    if (size == 0) continue;
    if (size > base_items.size()) throw std::invalid_argument("local_spread_profile: |I| larger than a copy");
    SpreadProfileRow row;
    row.size = size;
    std::uint64_t best = 0;
    const auto record = [&](const EdgeSet& I, bool keep_sample) {
      const std::uint64_t count = extension_count(catalog, I);
      if (count == 0) return;
      ++row.instances;
      best = std::max(best, count);
      if (keep_sample) {
        const double ratio = static_cast<double>(count) / static_cast<double>(total);
        row.samples.push_back(std::pow(ratio, 1.0 / static_cast<double>(size)));
      }
    };
    if (mode == ProfileMode::exhaustive) {
      for_each_subset(n, base_items, size, [&](const EdgeSet& I) { record(I, false); });
    } else {
      for (std::size_t s = 0; s < samples; ++s) {
        const EdgeWords host = catalog.edges(static_cast<std::size_t>(rng.below(catalog.size())));
        std::vector<std::size_t> items = EdgeSet::from_words(n, host).indices();
        EdgeSet I(n);
        for (std::size_t j = 0; j < size; ++j) {
          const std::size_t pick = j + static_cast<std::size_t>(rng.below(items.size() - j));
          std::swap(items[j], items[pick]);
          I.insert_index(items[j]);
        }
        record(I, true);
      }
    }
    row.max_ratio = Rational(BigInt(best), BigInt(total));
    row.max_local_spread = mp::pow(to_high(row.max_ratio), HighFloat(1) / HighFloat(size));
    row.q = params.q;
    row.within_q = within_power_of_q(row.max_ratio, size, params);
    rows.push_back(std::move(row));
  }
  return rows;
}

AuditReport check_prop_easy(const CopyCatalog& catalog, const EdgeSet& I) {
  require_square(catalog, "check_prop_easy");
  const int n = catalog.n();
  const EdgeSubsetStats st = stats(I);
  if (3 * st.edges > static_cast<std::size_t>(n)) {
    throw std::invalid_argument("check_prop_easy: |I| = " + std::to_string(st.edges) + " exceeds n/3");
  }
  const std::size_t arg = static_cast<std::size_t>(n) - ceil_half(st.edges + st.components) - 1;
  const BigInt rhs = mp::pow(BigInt(16), static_cast<unsigned>(st.edges)) * factorial(static_cast<unsigned>(arg));

  AuditReport r;
  r.statement = "prop_easy";
  std::ostringstream inst;
  inst << "n=" << n << " l=" << st.edges << " c=" << st.components << " I=" << describe(I);
  r.instance = inst.str();
  r.lhs = Rational(BigInt(extension_count(catalog, I)));
  r.rhs_exact = Rational(rhs);
  r.rhs_text = rhs.str();
  r.holds = r.lhs <= *r.rhs_exact;
  return r;
}

std::vector<AuditReport> audit_prop_easy(const CopyCatalog& catalog, std::size_t max_edges) {
  const int n = catalog.n();
  const std::size_t limit = std::min(max_edges, static_cast<std::size_t>(n) / 3);
  const std::vector<std::size_t> items = power_edges(CyclicOrdering::identity(n), 2).indices();
  std::vector<AuditReport> out;
  for (std::size_t l = 0; l <= limit; ++l) {
    for_each_subset(n, items, l, [&](const EdgeSet& I) { out.push_back(check_prop_easy(catalog, I)); });
  }
  return out;
}

SubgraphCensus census_subgraphs(const EdgeSet& F, std::size_t max_edges) {
  const std::vector<Edge> edges = F.edges();
  const std::size_t h = edges.size();
  if (h > max_edges) throw BudgetExceeded(std::uint64_t{1} << std::min<std::size_t>(h, 63), std::uint64_t{1} << max_edges);
  SubgraphCensus census;
  census.h = h;
  census.counts.assign(h + 1, std::vector<std::uint64_t>(h + 1, 0));

  std::vector<int> parent(static_cast<std::size_t>(F.n()));
  const auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << h); ++mask) {
    std::iota(parent.begin(), parent.end(), 0);
    std::uint64_t touched = 0;
    std::size_t merges = 0;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      const Edge& e = edges[static_cast<std::size_t>(std::countr_zero(rest))];
      touched |= (std::uint64_t{1} << e.u) | (std::uint64_t{1} << e.v);
      const int a = find(e.u);
      const int b = find(e.v);
      if (a != b) {
        parent[static_cast<std::size_t>(a)] = b;
        ++merges;
      }
    }
    const auto l = static_cast<std::size_t>(std::popcount(mask));
    const std::size_t c = static_cast<std::size_t>(std::popcount(touched)) - merges;
    ++census.counts[l][c];
  }
  return census;
}

namespace {

AuditReport easy2_report(const EdgeSet& F, std::size_t h, std::size_t l, std::size_t c, std::uint64_t count) {
  const Rational base = 8 * e_enclosure().lo;
  const Rational rhs_lo = pow(base, static_cast<unsigned>(l)) * Rational(binomial(static_cast<std::int64_t>(2 * h),
                                                                                  static_cast<std::int64_t>(c)));
  AuditReport r;
  r.statement = "prop_easy2";
  std::ostringstream inst;
  inst << "h=" << h << " l=" << l << " c=" << c << " F=" << describe(F);
  r.instance = inst.str();
  r.lhs = Rational(BigInt(count));
  r.rhs_text = to_decimal(rhs_lo);
  r.holds = r.lhs <= rhs_lo;
  r.note = "rhs is a certified lower enclosure of (8e)^l C(2h,c)";
  return r;
}

}  // namespace

AuditReport check_prop_easy2(const EdgeSet& F, std::size_t l, std::size_t c) {
  const SubgraphCensus census = census_subgraphs(F);
  const std::uint64_t count = (l <= census.h && c <= census.h) ? census.counts[l][c] : 0;
  return easy2_report(F, census.h, l, c, count);
}

std::vector<AuditReport> audit_prop_easy2(const EdgeSet& F) {
  const SubgraphCensus census = census_subgraphs(F);
  std::vector<AuditReport> out;
  for (std::size_t l = 0; l <= census.h; ++l) {
    for (std::size_t c = 0; c <= l; ++c) out.push_back(easy2_report(F, census.h, l, c, census.counts[l][c]));
  }
  return out;
}

namespace {

class ConnectedEdgeSets {
 public:
  ConnectedEdgeSets(const Graph& g, std::size_t target)
      : edges_(g.edges().edges()), incident_(static_cast<std::size_t>(g.n())), discovered_(edges_.size(), 0),
        target_(target) {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      incident_[static_cast<std::size_t>(edges_[i].u)].push_back(i);
      incident_[static_cast<std::size_t>(edges_[i].v)].push_back(i);
    }
  }

  std::uint64_t count_from(int root) {
    count_ = 0;
    vertices_ = std::uint64_t{1} << root;
    for (std::size_t e : incident_[static_cast<std::size_t>(root)]) {
      discovered_[e] = 1;
      frontier_.push_back(e);
    }
    grow(0);
    return count_;
  }

 private:
  // Decides frontier edges in discovery order: each connected set is reached
  // by exactly one include/exclude path.
  void grow(std::size_t chosen) {
    if (chosen == target_) {
      ++count_;
      return;
    }
    if (frontier_.empty()) return;
    const std::size_t e = frontier_.back();
    frontier_.pop_back();

    grow(chosen);

    int fresh = -1;
    if (!((vertices_ >> edges_[e].u) & 1U)) fresh = edges_[e].u;
    if (!((vertices_ >> edges_[e].v) & 1U)) fresh = edges_[e].v;
    std::size_t added = 0;
    if (fresh >= 0) {
      vertices_ |= std::uint64_t{1} << fresh;
      for (std::size_t f : incident_[static_cast<std::size_t>(fresh)]) {
        if (!discovered_[f]) {
          discovered_[f] = 1;
          frontier_.push_back(f);
          ++added;
        }
      }
    }
    grow(chosen + 1);
    for (; added > 0; --added) {
      discovered_[frontier_.back()] = 0;
      frontier_.pop_back();
    }
    if (fresh >= 0) vertices_ &= ~(std::uint64_t{1} << fresh);
    frontier_.push_back(e);
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<char> discovered_;
  std::vector<std::size_t> frontier_;
  std::uint64_t vertices_ = 0;
  std::size_t target_;
  std::uint64_t count_ = 0;
};

}  // namespace

std::uint64_t count_connected_subgraphs(const Graph& g, int root, std::size_t h) {
  if (root < 0 || root >= g.n()) throw std::out_of_range("count_connected_subgraphs: root out of range");
  ConnectedEdgeSets enumerator(g, h);
  return enumerator.count_from(root);
}

AuditReport check_tree_lemma(const Graph& g, int root, std::size_t h, double budget) {
  if (h == 0) throw std::invalid_argument("check_tree_lemma: the strict bound needs h >= 1");
  int max_degree = 0;
  for (int v = 0; v < g.n(); ++v) max_degree = std::max(max_degree, g.degree(v));
  const double work = std::pow(std::exp(1.0) * max_degree, static_cast<double>(h));
  if (work > budget) throw BudgetExceeded(static_cast<std::uint64_t>(std::ceil(work)), static_cast<std::uint64_t>(budget));

  const Rational rhs_lo = pow(e_enclosure().lo * max_degree, static_cast<unsigned>(h));
  AuditReport r;
  r.statement = "tree_lemma";
  std::ostringstream inst;
  inst << "n=" << g.n() << " maxdeg=" << max_degree << " root=" << root << " h=" << h;
  r.instance = inst.str();
  r.lhs = Rational(BigInt(count_connected_subgraphs(g, root, h)));
  r.rhs_text = to_decimal(rhs_lo);
  r.holds = r.lhs < rhs_lo;
  r.note = "strict; rhs is a certified lower enclosure of (e*maxdeg)^h";
  return r;
}

namespace {

// Child slots of the infinite tree are (parent node, child position); node ids
// are assigned as slots are taken.
class SubtreeEnumerator {
 public:
  SubtreeEnumerator(int branching, int target) : branching_(branching), target_(target) {}

  std::uint64_t run() {
    if (target_ <= 0) return 0;
    take_root();
    grow();
    return count_;
  }

 private:
  struct Slot {
    int parent;
    int position;
  };

  void open_children(int node) {
    for (int c = branching_ - 1; c >= 0; --c) frontier_.push_back(Slot{node, c});
  }

  void take_root() {
    nodes_.push_back(Slot{-1, 0});
    open_children(0);
  }

  void grow() {
    if (static_cast<int>(nodes_.size()) == target_) {
      ++count_;
      return;
    }
    if (frontier_.empty()) return;
    const Slot slot = frontier_.back();
    frontier_.pop_back();

    grow();

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(slot);
    open_children(id);
    grow();
    frontier_.resize(frontier_.size() - static_cast<std::size_t>(branching_));
    nodes_.pop_back();

    frontier_.push_back(slot);
  }

  int branching_;
  int target_;
  std::vector<Slot> nodes_;
  std::vector<Slot> frontier_;
  std::uint64_t count_ = 0;
};

}  // namespace

std::uint64_t enumerate_rooted_subtrees(int branching, int vertices) {
  if (branching < 1) throw std::invalid_argument("enumerate_rooted_subtrees: branching must be positive");
  return SubtreeEnumerator(branching, vertices).run();
}

BigInt rooted_subtree_formula(int branching, int vertices) {
  if (branching < 1 || vertices < 1) throw std::invalid_argument("rooted_subtree_formula: need positive arguments");
  const BigInt top = binomial(static_cast<std::int64_t>(branching) * vertices, vertices);
  const BigInt bottom = BigInt((branching - 1) * vertices + 1);
  if (top % bottom != 0) throw std::logic_error("rooted_subtree_formula: non-integral");
  return top / bottom;
}

AuditReport check_subtree_formula(int branching, int vertices) {
  AuditReport r;
  r.statement = "subtree_formula";
  r.instance = "branching=" + std::to_string(branching) + " v=" + std::to_string(vertices);
  r.lhs = Rational(BigInt(enumerate_rooted_subtrees(branching, vertices)));
  const BigInt closed = rooted_subtree_formula(branching, vertices);
  r.rhs_exact = Rational(closed);
  r.rhs_text = closed.str();
  r.holds = r.lhs == *r.rhs_exact;
  r.note = "identity: enumeration must equal C(bv,v)/((b-1)v+1)";
  return r;
}

AuditReport check_ivc(const CyclicOrdering& S, const EdgeSet& I) {
  const int n = S.n();
  if (!I.is_subset_of(power_edges(S, 2))) throw std::invalid_argument("check_ivc: I is not inside the copy S");
  const EdgeSubsetStats st = stats(I);
  if (3 * st.edges > static_cast<std::size_t>(n)) {
    throw std::invalid_argument("check_ivc: |I| = " + std::to_string(st.edges) + " exceeds n/3");
  }
  const auto rhs = static_cast<long long>(2 * st.vertices) - static_cast<long long>(3 * st.components);
  AuditReport r;
  r.statement = "ivc";
  std::ostringstream inst;
  inst << "n=" << n << " l=" << st.edges << " v=" << st.vertices << " c=" << st.components << " I=" << describe(I);
  r.instance = inst.str();
  r.lhs = Rational(static_cast<long long>(st.edges));
  r.rhs_exact = Rational(rhs);
  r.rhs_text = std::to_string(rhs);
  r.holds = static_cast<long long>(st.edges) <= rhs;
  return r;
}

std::vector<AuditReport> audit_ivc(int n, std::size_t max_edges) {
  const CyclicOrdering S = CyclicOrdering::identity(n);
  const std::vector<std::size_t> items = power_edges(S, 2).indices();
  const std::size_t limit = std::min(max_edges, static_cast<std::size_t>(n) / 3);
  std::vector<AuditReport> out;
  for (std::size_t l = 0; l <= limit; ++l) {
    for_each_subset(n, items, l, [&](const EdgeSet& I) { out.push_back(check_ivc(S, I)); });
  }
  return out;
}

Rational OverlapHistogram::f(std::size_t i) const {
  if (i >= counts.size()) return Rational(0);
  return Rational(BigInt(counts[i]), BigInt(total));
}

Rational OverlapHistogram::sum() const {
  Rational s = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += f(i);
  return s;
}

OverlapHistogram overlap_histogram(const CopyCatalog& catalog, const CyclicOrdering& S) {
  if (S.n() != catalog.n()) throw std::invalid_argument("overlap_histogram: vertex count mismatch");
  const EdgeSet s_edges = power_edges(S, catalog.k());
  OverlapHistogram h;
  h.n = catalog.n();
  h.total = catalog.size();
  h.counts.assign(s_edges.size() + 1, 0);
  for (std::size_t j = 0; j < catalog.size(); ++j) ++h.counts[bits::intersect_count(catalog.edges(j), s_edges.words())];
  return h;
}

OverlapHistogram overlap_histogram(const CopyCatalog& catalog) {
  return overlap_histogram(catalog, CyclicOrdering::identity(catalog.n()));
}

std::vector<FiBound> check_fi_bounds(const OverlapHistogram& hist) {
  const int n = hist.n;
  const SpreadParams params = spread_params(n);
  const std::size_t top = hist.counts.size() - 1;
  const std::size_t first = (static_cast<std::size_t>(n) + 2) / 3;
  std::vector<FiBound> out;
  for (std::size_t i = first; i <= top; ++i) {
    const Rational fi = hist.f(i);
    const BigInt choose = binomial(static_cast<std::int64_t>(top), static_cast<std::int64_t>(i));
    FiBound row;
    row.i = i;
    row.report.statement = "fi_bound";
    row.report.instance = "n=" + std::to_string(n) + " i=" + std::to_string(i);
    row.report.lhs = fi;
    const HighFloat rhs = HighFloat(choose) * mp::pow(params.q, static_cast<int>(i));
    row.report.rhs_text = to_decimal(rhs);
    // f <= C q^i  <=>  (f/C)^(2n) <= (q^(2n))^i
    row.report.holds = within_power_of_q(fi / Rational(choose), i, params);
    row.report.note = "decided exactly through the 2n-th power";
    row.scaled = (to_high(fi) * mp::pow(HighFloat(n), HighFloat(i) / 2)).convert_to<double>();
    out.push_back(std::move(row));
  }
  return out;
}

Rational expected_high_overlap(const OverlapHistogram& hist, std::int64_t w_prime, std::size_t k_cut) {
  const auto m = static_cast<std::int64_t>(pair_count(hist.n));
  const auto size = static_cast<std::int64_t>(hist.counts.size() - 1);
  if (w_prime < 0 || w_prime > m - size) {
    throw std::invalid_argument("expected_high_overlap: w' = " + std::to_string(w_prime) + " outside [0, m - 2n] = [0, " +
                                std::to_string(m - size) + "]");
  }
  Rational total = 0;
  for (std::size_t i = k_cut; i < hist.counts.size(); ++i) {
    if (hist.counts[i] == 0) continue;
    const auto outside = size - static_cast<std::int64_t>(i);
    const BigInt denom = binomial(m - size, outside);
    if (denom == 0) throw std::logic_error("expected_high_overlap: copy with more outside edges than exist");
    total += Rational(BigInt(hist.counts[i]) * binomial(w_prime, outside), denom);
  }
  return total;
}

MonteCarloEstimate expected_high_overlap_mc(const CopyCatalog& catalog, const CyclicOrdering& S,
                                            std::int64_t w_prime, std::size_t k_cut, std::size_t samples,
                                            RngStream& rng) {
  const EdgeSet s_edges = power_edges(S, catalog.k());
  const auto m = static_cast<std::int64_t>(pair_count(catalog.n()));
  if (w_prime < 0 || w_prime > m - static_cast<std::int64_t>(s_edges.size())) {
    throw std::invalid_argument("expected_high_overlap_mc: w' out of range");
  }
  std::vector<std::size_t> eligible;
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    if (bits::intersect_count(catalog.edges(j), s_edges.words()) >= k_cut) eligible.push_back(j);
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const EdgeSet z = sample_subset_avoiding(s_edges, static_cast<std::size_t>(w_prime), rng) | s_edges;
    std::size_t hits = 0;
    for (std::size_t j : eligible) hits += bits::subset(catalog.edges(j), z.words());
    const auto x = static_cast<double>(hits);
    sum += x;
    sum_sq += x * x;
  }
  MonteCarloEstimate est;
  est.samples = samples;
  if (samples == 0) return est;
  const auto count = static_cast<double>(samples);
  est.mean = sum / count;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - count * est.mean * est.mean) / (count - 1)) : 0.0;
  est.std_error = std::sqrt(var / count);
  return est;
}

AuditReport check_fiand_ratio(int n, std::int64_t w_prime, int i) {
  if (n < 5) throw std::invalid_argument("check_fiand_ratio: need n >= 5");
  const auto m = static_cast<std::int64_t>(n) * (n - 1) / 2;
  const std::int64_t size = 2 * static_cast<std::int64_t>(n);
  if (i < 0 || i > size) throw std::invalid_argument("check_fiand_ratio: i outside [0, 2n]");
  if (w_prime < 0) throw std::invalid_argument("check_fiand_ratio: negative w'");
  const std::int64_t out = size - i;
  if (m - size < out) {
    throw std::invalid_argument("check_fiand_ratio: C(m-2n, 2n-i) vanishes for n=" + std::to_string(n) +
                                " i=" + std::to_string(i));
  }
  const Rational first(binomial(w_prime, out), binomial(m - size, out));
  const Rational second(binomial(w_prime + size, size), binomial(m, size));
  const Rational lhs = first / second;
  const Rational rhs = Rational(falling(w_prime, out), falling(w_prime + size, out)) *
                       Rational(falling(m, out), falling(m - size, out)) *
                       Rational(falling(m - size + i, i), falling(w_prime + i, i));
  AuditReport r;
  r.statement = "fiand_ratio";
  r.instance = "n=" + std::to_string(n) + " w'=" + std::to_string(w_prime) + " i=" + std::to_string(i);
  r.lhs = lhs;
  r.rhs_exact = rhs;
  r.rhs_text = rhs.str();
  r.holds = lhs == rhs;
  r.note = "identity";
  return r;
}

}  // namespace sqham
