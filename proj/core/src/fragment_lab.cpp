#include "sqham/fragment_lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace sqham {

namespace mp = boost::multiprecision;

int default_fragment_cutoff(int n) {
  if (n < 1) throw std::invalid_argument("default_fragment_cutoff: need n >= 1");
  int k = 0;
  while (static_cast<long long>(k) * k < 16LL * n) ++k;
  return k;
}

TwoRoundPlan TwoRoundPlan::make(int n, double c0_surrogate, double C, std::optional<int> k,
                                std::optional<std::size_t> w) {
  check_vertex_count(n);
  TwoRoundPlan plan;
  plan.n = n;
  plan.c0_surrogate = c0_surrogate;
  plan.C = C;
  const double root = std::sqrt(static_cast<double>(n));
  plan.p0 = c0_surrogate / root;
  plan.p1 = C / root;
  plan.p = 1.0 - (1.0 - plan.p0) * (1.0 - plan.p1);
  plan.k = k.value_or(default_fragment_cutoff(n));
  if (w) {
    plan.w = *w;
  } else {
    const double raw = std::ceil(C * std::pow(static_cast<double>(n), 1.5));
    plan.w = std::min(pair_count(n), static_cast<std::size_t>(std::max(0.0, raw)));
  }
  plan.validate();
  return plan;
}

void TwoRoundPlan::validate() const {
  check_vertex_count(n);
  const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(p0)) throw std::invalid_argument("TwoRoundPlan: p0 = c0_surrogate/sqrt(n) must lie in [0, 1]");
  if (!in_unit(p1)) throw std::invalid_argument("TwoRoundPlan: p1 = C/sqrt(n) must lie in [0, 1]");
  if (!in_unit(p)) throw std::invalid_argument("TwoRoundPlan: p must lie in [0, 1]");
  if (std::abs(p - (p0 + p1 - p0 * p1)) > 1e-12) throw std::invalid_argument("TwoRoundPlan: p != p0 + p1 - p0 p1");
  if (k < 1) throw std::invalid_argument("TwoRoundPlan: k must be positive");
}

PairClassification classify_pair(const CyclicOrdering& S, const EdgeSet& W, int k, const SearchBudget& budget) {
  const FragmentOutcome outcome = min_fragment(S, W, 2, k, budget);
  PairClassification c;
  c.S = S;
  c.W = W;
  c.resolved = outcome.status != SearchStatus::budget_unknown;
  c.good = outcome.status == SearchStatus::found;
  c.min_fragment_size = outcome.min_size;
  return c;
}

FragmentIndex::FragmentIndex(const CopyCatalog& catalog, const EdgeSet& W, int cap) : stride_(catalog.words_per_set()) {
  if (W.n() != catalog.n()) throw std::invalid_argument("FragmentIndex: vertex count mismatch");
  struct Entry {
    int size;
    std::vector<std::uint64_t> words;
  };
  std::vector<Entry> entries;
  const EdgeWords w = W.words();
  std::vector<std::uint64_t> frag(stride_);
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    const EdgeWords copy = catalog.edges(j);
    int size = 0;
    for (std::size_t i = 0; i < stride_; ++i) {
      frag[i] = copy[i] & ~w[i];
      size += std::popcount(frag[i]);
    }
    if (size <= cap) entries.push_back(Entry{size, frag});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.size != b.size) return a.size < b.size;
    return std::lexicographical_compare(a.words.rbegin(), a.words.rend(), b.words.rbegin(), b.words.rend());
  });
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const Entry& a, const Entry& b) { return a.words == b.words; }),
                entries.end());
  sizes_.reserve(entries.size());
  words_.reserve(entries.size() * stride_);
  for (const Entry& e : entries) {
    sizes_.push_back(e.size);
    words_.insert(words_.end(), e.words.begin(), e.words.end());
  }
}

std::optional<FragmentIndex::Hit> FragmentIndex::smallest_within(EdgeWords s_edges) const {
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    const EdgeWords frag(words_.data() + i * stride_, stride_);
    if (bits::subset(frag, s_edges)) return Hit{sizes_[i], frag};
  }
  return std::nullopt;
}

BadPairCensus bad_pair_census(const CopyCatalog& catalog, const TwoRoundPlan& plan, std::uint64_t trials,
                              std::uint64_t master_seed, unsigned threads) {
  if (catalog.k() != 2 || catalog.n() != plan.n) throw std::invalid_argument("bad_pair_census: catalog does not match plan");
  plan.validate();
  const int n = plan.n;
  const std::size_t w = std::min(plan.w, pair_count(n));
  struct Outcome {
    bool bad;
    std::size_t overlap;
  };
  std::vector<Outcome> outcomes(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    RngStream rng(master_seed, t);
    const EdgeSet W = sample_gnm(n, w, rng).edges();
    const EdgeSet S = catalog.edge_set(static_cast<std::size_t>(rng.below(catalog.size())));
    outcomes[t] = Outcome{!min_fragment_exhaustive(catalog, S, W, plan.k).has_value(), W.intersection_size(S)};
  });

  BadPairCensus census;
  census.trials = trials;
  census.bad_by_overlap.assign(2 * static_cast<std::size_t>(n) + 1, 0);
  for (const Outcome& o : outcomes) {
    if (o.bad) {
      ++census.bad;
      ++census.bad_by_overlap[o.overlap];
    } else {
      ++census.good;
    }
  }
  census.bad_fraction = wilson(census.bad, census.good + census.bad);
  census.lemma_bound = 2.0 * std::pow(plan.C, -static_cast<double>(plan.k) / 3.0);
  return census;
}

W0Census successful_w0(const CopyCatalog& catalog, const EdgeSet& W0, int k) {
  const FragmentIndex index(catalog, W0, k);
  W0Census census;
  census.examined = catalog.size();
  for (std::size_t s = 0; s < catalog.size(); ++s) {
    if (!index.smallest_within(catalog.edges(s))) ++census.bad;
  }
  census.successful = 2 * census.bad <= census.examined;
  census.bad_fraction = wilson(census.bad, census.examined);
  return census;
}

W0Census successful_w0_sampled(const CopyCatalog& catalog, const EdgeSet& W0, int k, std::size_t samples,
                               RngStream& rng) {
  const FragmentIndex index(catalog, W0, k);
  W0Census census;
  census.exact = false;
  census.examined = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    if (!index.smallest_within(catalog.edges(static_cast<std::size_t>(rng.below(catalog.size()))))) ++census.bad;
  }
  census.bad_fraction = wilson(census.bad, census.examined);
  census.successful = census.bad_fraction.estimate <= 0.5;
  return census;
}

FragmentFamily build_fragment_family(const CopyCatalog& catalog, const EdgeSet& W0, int k) {
  const int n = catalog.n();
  if (catalog.k() != 2) throw std::invalid_argument("build_fragment_family: needs the square-cycle catalog");
  if (k < 0 || k > 2 * n) throw std::invalid_argument("build_fragment_family: k must lie in [0, 2n]");
  const FragmentIndex index(catalog, W0, k);
  FragmentFamily family;
  family.n = n;
  family.k = k;
  family.examined = catalog.size();
  for (std::size_t s = 0; s < catalog.size(); ++s) {
    const EdgeWords s_words = catalog.edges(s);
    const auto hit = index.smallest_within(s_words);
    if (!hit) {
      ++family.bad;
      continue;
    }
    EdgeSet fragment = EdgeSet::from_words(n, hit->fragment);
    EdgeSet chi = fragment;
    int missing = k - hit->size;
    for (std::size_t idx : (EdgeSet::from_words(n, s_words) - fragment).indices()) {
      if (missing == 0) break;
      chi.insert_index(idx);
      --missing;
    }
    family.members.push_back(std::move(chi));
    family.fragments.push_back(std::move(fragment));
    family.sources.push_back(s);
  }
  return family;
}

bool verify_fragment_family(const CopyCatalog& catalog, const FragmentFamily& family, const EdgeSet& W0) {
  for (std::size_t a = 0; a < family.members.size(); ++a) {
    const EdgeSet& chi = family.members[a];
    const EdgeSet& frag = family.fragments[a];
    const EdgeSet S = catalog.edge_set(family.sources[a]);
    if (chi.size() != static_cast<std::size_t>(family.k)) return false;
    if (!chi.is_subset_of(S) || !frag.is_subset_of(chi)) return false;
    const EdgeSet host = S | W0;
    bool witnessed = false;
    for (std::size_t j = 0; j < catalog.size() && !witnessed; ++j) {
      const EdgeSet J = catalog.edge_set(j);
      witnessed = J.is_subset_of(host) && (J - W0) == frag;
    }
    if (!witnessed) return false;
  }
  return true;
}

bool SecondMomentReport::chebyshev_consistent() const {
  if (!chebyshev_bound) return false;
  return empirical_p_x0 <= chebyshev_bound->to_double() + 4.0 * empirical_p_x0_sigma;
}

SecondMomentReport second_moment(const FragmentFamily& family, const QuadSurd& p1, std::size_t simulations,
                                 RngStream& rng) {
  if (p1.sign() < 0 || QuadSurd(Rational(1)) < p1) throw std::invalid_argument("second_moment: p1 outside [0, 1]");
  const auto k = static_cast<std::size_t>(family.k);
  const std::size_t size = family.members.size();

  std::vector<QuadSurd> powers(2 * k + 1);
  powers[0] = QuadSurd(Rational(1));
  for (std::size_t j = 1; j < powers.size(); ++j) powers[j] = powers[j - 1] * p1;

  SecondMomentReport r;
  r.family_size = size;
  r.mu = QuadSurd(Rational(static_cast<unsigned long long>(size))) * powers[k];
  r.exact_mean = QuadSurd(Rational(0));
  for (const EdgeSet& a : family.members) r.exact_mean += pow(p1, static_cast<unsigned>(a.size()));

  r.pair_overlaps.assign(k + 1, 0);
  for (std::size_t a = 0; a < size; ++a) {
    const EdgeWords wa = family.members[a].words();
    ++r.pair_overlaps[family.members[a].size()];
    for (std::size_t b = a + 1; b < size; ++b) r.pair_overlaps[bits::intersect_count(wa, family.members[b].words())] += 2;
  }
  QuadSurd second(Rational(0));
  r.var_bound = QuadSurd(Rational(0));
  for (std::size_t j = 0; j <= k; ++j) {
    if (r.pair_overlaps[j] == 0) continue;
    const QuadSurd term = QuadSurd(Rational(static_cast<unsigned long long>(r.pair_overlaps[j]))) * powers[2 * k - j];
    second += term;
    if (j > 0) r.var_bound += term;
  }
  r.exact_variance = second - r.exact_mean * r.exact_mean;
  if (r.mu.sign() > 0) r.chebyshev_bound = r.exact_variance / (r.mu * r.mu);

  r.simulations = simulations;
  if (simulations > 0) {
    const double p = p1.to_double();
    std::uint64_t zeros = 0;
    double total = 0.0;
    for (std::size_t s = 0; s < simulations; ++s) {
      const EdgeSet w1 = sample_gnp(family.n, std::clamp(p, 0.0, 1.0), rng).edges();
      std::uint64_t x = 0;
      for (const EdgeSet& a : family.members) x += bits::subset(a.words(), w1.words());
      zeros += x == 0;
      total += static_cast<double>(x);
    }
    const auto count = static_cast<double>(simulations);
    r.empirical_p_x0 = static_cast<double>(zeros) / count;
    r.empirical_p_x0_sigma = std::sqrt(r.empirical_p_x0 * (1.0 - r.empirical_p_x0) / count);
    r.empirical_mean = total / count;
  }
  return r;
}

PathologicalCensus pathological_census(const CopyCatalog& catalog, const EdgeSet& Z, int k, double C,
                                       std::int64_t w_prime) {
  const int n = catalog.n();
  if (catalog.k() != 2) throw std::invalid_argument("pathological_census: needs the square-cycle catalog");
  if (w_prime < 0 || Z.size() != static_cast<std::size_t>(w_prime) + 2 * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("pathological_census: |Z| must equal w' + 2n");
  }
  if (!(C > 0.0)) throw std::invalid_argument("pathological_census: C must be positive");
  std::vector<std::size_t> inside;
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    if (bits::subset(catalog.edges(j), Z.words())) inside.push_back(j);
  }
  PathologicalCensus census;
  census.copies_inside = inside.size();
  for (std::size_t s : inside) {
    bool good = false;
    for (std::size_t j : inside) {
      if (static_cast<int>(bits::intersect_count(catalog.edges(j), catalog.edges(s))) <= k) {
        good = true;
        break;
      }
    }
    census.bad += !good;
  }
  const auto m = static_cast<std::int64_t>(pair_count(n));
  census.threshold = mp::pow(HighFloat(C), -HighFloat(k) / 3) * HighFloat(count_copies(n)) *
                     HighFloat(binomial(w_prime + 2 * n, 2 * n)) / HighFloat(binomial(m, 2 * n));
  census.pathological = HighFloat(census.bad) > census.threshold;
  return census;
}

std::vector<TwoRoundRecord> two_round_experiment(const CopyCatalog& catalog, const TwoRoundPlan& plan,
                                                 std::uint64_t trials, std::uint64_t master_seed,
                                                 const SearchBudget& budget, unsigned threads) {
  if (catalog.k() != 2 || catalog.n() != plan.n) throw std::invalid_argument("two_round_experiment: catalog does not match plan");
  plan.validate();
  std::vector<TwoRoundRecord> records(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const auto start = std::chrono::steady_clock::now();
    RngStream rng(master_seed, t);
    TwoRoundRecord rec;
    rec.trial = t;
    const EdgeSet w0 = sample_gnp(plan.n, plan.p0, rng).edges();
    const FragmentFamily family = build_fragment_family(catalog, w0, plan.k);
    rec.w0_size = w0.size();
    rec.bad_pairs = family.bad;
    rec.w0_successful = family.successful();
    rec.family_size = family.members.size();
    const EdgeSet w1 = sample_gnp(plan.n, plan.p1, rng).edges();
    for (const EdgeSet& a : family.members) rec.x += bits::subset(a.words(), w1.words());
    RngStream solver_rng = rng.substream(1);
    const SearchOutcome outcome = find_power_ham(Graph(w0 | w1), 2, budget, solver_rng);
    rec.solver_status = outcome.status;
    rec.sound = rec.x == 0 || outcome.status == SearchStatus::found;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    records[t] = rec;
  });
  return records;
}

}  // namespace sqham
