#include "sqham/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "sqham/copies.hpp"
#include "sqham/fragment_lab.hpp"
#include "sqham/graph.hpp"
#include "sqham/rng.hpp"
#include "sqham/solver.hpp"
#include "sqham/spread_audit.hpp"
#include "sqham/threshold_mc.hpp"

#ifndef SQHAM_VERSION
#define SQHAM_VERSION "0.0.0"
#endif

namespace sqham::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Exact value of a decimal literal such as "1.25" or "3e-2".
Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) negative = text[pos++] == '-';
  BigInt digits = 0;
  long long scale = 0;
  bool any = false;
  bool fraction = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.' && !fraction) {
      fraction = true;
    } else if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      scale -= fraction ? 1 : 0;
      any = true;
    } else {
      break;
    }
  }
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    long long exponent = 0;
    const auto res = std::from_chars(text.data() + pos + 1, text.data() + text.size(), exponent);
    if (res.ec != std::errc{}) throw UsageError("malformed number '" + text + "'");
    pos = static_cast<std::size_t>(res.ptr - text.data());
    scale += exponent;
  }
  if (!any || pos != text.size()) throw UsageError("malformed number '" + text + "'");
  Rational r(digits);
  const BigInt ten_power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  if (scale >= 0) {
    r *= Rational(ten_power);
  } else {
    r /= Rational(ten_power);
  }
  return negative ? Rational(-r) : r;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    T value{};
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
      throw UsageError(std::string("malformed ") + what + " entry '" + item + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + "\"";
}

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

struct Globals {
  unsigned threads = 1;
  bool no_timestamp = false;
};

class Emitter {
 public:
  Emitter(const Globals& globals, std::ostream& out) : globals_(globals), out_(out) {}

  std::string csv_header(const Json& config) const {
    std::string h = "# config: " + config.dump() + "\n";
    if (!globals_.no_timestamp) h += "# timestamp: " + timestamp_utc() + "\n";
    return h;
  }

  void stamp(Json& doc, const Json& config) const {
    doc["config"] = config;
    if (!globals_.no_timestamp) doc["timestamp"] = timestamp_utc();
  }

  double seconds(double s) const { return globals_.no_timestamp ? 0.0 : s; }

  void emit(const std::string& path, const std::string& content) const {
    if (path.empty() || path == "-") {
      out_ << content;
      out_.flush();
    } else {
      write_atomic(path, content);
    }
  }

 private:
  const Globals& globals_;
  std::ostream& out_;
};

Json base_config(std::string_view subcommand) {
  Json c;
  c["tool"] = "sqham";
  c["version"] = SQHAM_VERSION;
  c["subcommand"] = subcommand;
  return c;
}

Json witness_json(const std::optional<CyclicOrdering>& w) {
  if (!w) return nullptr;
  return Json(std::vector<int>(w->order().begin(), w->order().end()));
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  int n = 0;
  double p = 0.0;
  std::size_t m = 0;
  int power = 0;
  bool complete = false;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* p_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* power_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int run_gen(const GenArgs& a, const Emitter& emit) {
  check_vertex_count(a.n);
  const int modes = static_cast<int>(a.p_opt->count() > 0) + static_cast<int>(a.m_opt->count() > 0) +
                    static_cast<int>(a.power_opt->count() > 0) + static_cast<int>(a.complete);
  if (modes != 1) throw UsageError("gen: give exactly one of --p, --m, --power, --complete");
  const bool stochastic = a.p_opt->count() > 0 || a.m_opt->count() > 0;
  if (stochastic && a.seed_opt->count() == 0) throw UsageError("gen: --seed is required with --p or --m");

  std::optional<Graph> g;
  if (stochastic) {
    RngStream rng(a.seed, 0);
    g = a.p_opt->count() > 0 ? sample_gnp(a.n, a.p, rng) : sample_gnm(a.n, a.m, rng);
  } else if (a.complete) {
    g = Graph(EdgeSet::complete(a.n));
  } else {
    g = Graph(power_edges(CyclicOrdering::identity(a.n), a.power));
  }
  std::ostringstream os;
  write_graph(os, *g);
  emit.emit(a.out, os.str());
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string input;
  int k = 2;
  std::uint64_t seed = 0;
  std::uint64_t node_limit = SearchBudget{}.node_limit;
  double time_limit = SearchBudget{}.time_limit;
  bool no_pruning = false;
  std::string out;
};

int run_solve(const SolveArgs& a, const Emitter& emit) {
  std::ifstream in(a.input);
  if (!in) throw UsageError("solve: cannot read " + a.input);
  const Graph g = read_graph(in);
  RngStream rng(a.seed, 0);
  SearchOptions options;
  options.degree_pruning = !a.no_pruning;
  const SearchOutcome outcome = find_power_ham(g, a.k, SearchBudget{a.node_limit, a.time_limit}, rng, options);

  Json config = base_config("solve");
  config["input"] = a.input;
  config["k"] = a.k;
  config["seed"] = a.seed;
  config["node_limit"] = a.node_limit;
  config["time_limit"] = a.time_limit;
  config["degree_pruning"] = options.degree_pruning;
  Json doc;
  doc["status"] = to_string(outcome.status);
  doc["witness"] = witness_json(outcome.witness);
  doc["nodes"] = outcome.nodes_expanded;
  doc["seconds"] = emit.seconds(outcome.seconds);
  emit.stamp(doc, config);
  emit.emit(a.out, doc.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------- copies

struct CopiesArgs {
  int n = 0;
  int k = 2;
  std::string csv;
  bool enumerate = false;
  std::uint64_t budget = kDefaultCatalogBudget;
};

int run_copies(const CopiesArgs& a, const Emitter& emit, std::ostream& out) {
  check_vertex_count(a.n);
  if (a.n < 3 || a.k < 1) throw UsageError("copies: need n >= 3 and k >= 1");
  if (!a.enumerate && a.csv.empty()) {
    out << count_copies(a.n) << "\n";
    return 0;
  }
  const CopyCatalog catalog = enumerate_copies(a.n, a.k, a.budget);
  out << catalog.size() << "\n";
  if (!a.csv.empty()) {
    Json config = base_config("copies");
    config["n"] = a.n;
    config["k"] = a.k;
    std::ostringstream os;
    os << emit.csv_header(config);
    catalog.write_csv(os);
    emit.emit(a.csv, os.str());
  }
  return 0;
}

// ---------------------------------------------------------------- audit

struct AuditArgs {
  std::string statement;
  int n = 0;
  bool exhaustive = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t max_l = 0;
  std::size_t max_f = 0;
  std::string out;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* max_l_opt = nullptr;
  CLI::Option* max_f_opt = nullptr;
};

EdgeSet random_subset(int n, const std::vector<std::size_t>& items, std::size_t size, RngStream& rng) {
  std::vector<std::size_t> pool = items;
  EdgeSet s(n);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    s.insert_index(pool[i]);
  }
  return s;
}

struct AuditRow {
  AuditReport report;
  bool asserted = true;
};

std::vector<AuditRow> asserted(std::vector<AuditReport> reports) {
  std::vector<AuditRow> rows;
  rows.reserve(reports.size());
  for (AuditReport& r : reports) rows.push_back(AuditRow{std::move(r), true});
  return rows;
}

std::vector<AuditRow> collect_audit(const AuditArgs& a) {
  const std::string& st = a.statement;
  const bool sampled = a.samples_opt->count() > 0;
  if (sampled == a.exhaustive && st != "subtree_formula" && st != "tree_lemma") {
    throw UsageError("audit: give exactly one of --exhaustive or --samples");
  }
  if (sampled && a.seed_opt->count() == 0) throw UsageError("audit: --seed is required with --samples");
  RngStream rng(a.seed, 0);
  const auto need_n = [&](int lo, int hi) {
    if (a.n < lo || a.n > hi) {
      throw UsageError("audit " + st + ": --n must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  };

  if (st == "prop_easy") {
    need_n(5, 13);
    const std::size_t third = static_cast<std::size_t>(a.n) / 3;
    const std::size_t max_l = a.max_l_opt->count() > 0 ? a.max_l : third;
    if (max_l > third) throw UsageError("audit prop_easy: --max-l exceeds n/3");
    const CopyCatalog catalog = enumerate_copies(a.n);
    if (!sampled) return asserted(audit_prop_easy(catalog, max_l));
    const auto items = power_edges(CyclicOrdering::identity(a.n), 2).indices();
    std::vector<AuditReport> reports;
    for (std::size_t s = 0; s < a.samples; ++s) {
      const std::size_t size = static_cast<std::size_t>(rng.below(max_l + 1));
      reports.push_back(check_prop_easy(catalog, random_subset(a.n, items, size, rng)));
    }
    return asserted(std::move(reports));
  }
  if (st == "prop_easy2") {
    need_n(5, kMaxVertices);
    const auto items = power_edges(CyclicOrdering::identity(a.n), 2).indices();
    const std::size_t max_f = std::min(items.size(), a.max_f_opt->count() > 0 ? a.max_f : std::size_t{sampled ? 12U : 10U});
    if (max_f > kMaxCensusEdges) throw UsageError("audit prop_easy2: --max-f exceeds " + std::to_string(kMaxCensusEdges));
    if (!sampled) {
      EdgeSet F(a.n);
      for (std::size_t i = 0; i < max_f; ++i) F.insert_index(items[i]);
      return asserted(audit_prop_easy2(F));
    }
    std::vector<AuditReport> reports;
    for (std::size_t s = 0; s < a.samples; ++s) {
      const std::size_t size = 1 + static_cast<std::size_t>(rng.below(max_f));
      for (AuditReport& r : audit_prop_easy2(random_subset(a.n, items, size, rng))) reports.push_back(std::move(r));
    }
    return asserted(std::move(reports));
  }
  if (st == "tree_lemma") {
    need_n(5, kMaxVertices);
    const std::size_t max_h = a.max_l_opt->count() > 0 ? a.max_l : 5;
    const Graph g(power_edges(CyclicOrdering::identity(a.n), 2));
    std::vector<AuditReport> reports;
    for (std::size_t h = 1; h <= max_h; ++h) reports.push_back(check_tree_lemma(g, 0, h));
    return asserted(std::move(reports));
  }
  if (st == "subtree_formula") {
    const std::size_t max_v = a.max_l_opt->count() > 0 ? a.max_l : 8;
    std::vector<AuditReport> reports;
    for (int branching = 2; branching <= 4; ++branching) {
      for (std::size_t v = 1; v <= max_v; ++v) reports.push_back(check_subtree_formula(branching, static_cast<int>(v)));
    }
    return asserted(std::move(reports));
  }
  if (st == "ivc") {
    need_n(3, kMaxVertices);
    const std::size_t third = static_cast<std::size_t>(a.n) / 3;
    const std::size_t max_l = a.max_l_opt->count() > 0 ? a.max_l : third;
    if (max_l > third) throw UsageError("audit ivc: --max-l exceeds n/3");
    if (!sampled) return asserted(audit_ivc(a.n, max_l));
    const CyclicOrdering S = CyclicOrdering::identity(a.n);
    const auto items = power_edges(S, 2).indices();
    std::vector<AuditReport> reports;
    for (std::size_t s = 0; s < a.samples; ++s) {
      const std::size_t size = static_cast<std::size_t>(rng.below(max_l + 1));
      reports.push_back(check_ivc(S, random_subset(a.n, items, size, rng)));
    }
    return asserted(std::move(reports));
  }
  if (st == "fi_bounds") {
    need_n(5, 13);
    if (sampled) throw UsageError("audit fi_bounds: only --exhaustive is supported");
    const OverlapHistogram hist = overlap_histogram(enumerate_copies(a.n));
    std::vector<AuditReport> reports;
    for (FiBound& b : check_fi_bounds(hist)) reports.push_back(std::move(b.report));
    return asserted(std::move(reports));
  }
  if (st == "fiand") {
    need_n(3, kMaxVertices);
    if (!sampled) throw UsageError("audit fiand: only --samples is supported");
    const auto m = static_cast<std::int64_t>(pair_count(a.n));
    const std::int64_t two_n = 2 * static_cast<std::int64_t>(a.n);
    if (m - two_n < 0) throw UsageError("audit fiand: n too small for a copy to fit in K_n");
    std::vector<AuditReport> reports;
    while (reports.size() < a.samples) {
      const auto w_prime = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(3 * m + 1)));
      const auto i = static_cast<int>(rng.below(static_cast<std::uint64_t>(two_n + 1)));
      if (m - two_n < two_n - i) continue;
      reports.push_back(check_fiand_ratio(a.n, w_prime, i));
    }
    return asserted(std::move(reports));
  }
  if (st == "spread_profile") {
    need_n(5, 13);
    const std::size_t max_l = a.max_l_opt->count() > 0 ? a.max_l : 3;
    std::vector<std::size_t> sizes;
    for (std::size_t s = 1; s <= max_l; ++s) sizes.push_back(s);
    const CopyCatalog catalog = enumerate_copies(a.n);
    const auto rows = local_spread_profile(catalog, sizes, sampled ? ProfileMode::sampled : ProfileMode::exhaustive,
                                           a.samples, rng);
    std::vector<AuditRow> out;
    for (const SpreadProfileRow& row : rows) {
      AuditReport r;
      r.statement = "spread_profile";
      r.instance = "n=" + std::to_string(a.n) + " size=" + std::to_string(row.size) +
                   " instances=" + std::to_string(row.instances);
      r.lhs = row.max_ratio;
      r.rhs_text = to_decimal(HighFloat(boost::multiprecision::pow(row.q, static_cast<int>(row.size))));
      r.holds = row.within_q;
      r.note = "max local spread " + to_decimal(row.max_local_spread) + " vs q " + to_decimal(row.q) +
               "; reported, not asserted";
      out.push_back(AuditRow{std::move(r), false});
    }
    return out;
  }
  throw UsageError("audit: unknown statement '" + st + "'");
}

int run_audit(const AuditArgs& a, const Emitter& emit, std::ostream& err) {
  const std::vector<AuditRow> rows = collect_audit(a);
  Json config = base_config("audit");
  config["statement"] = a.statement;
  config["n"] = a.n;
  config["mode"] = a.exhaustive ? "exhaustive" : "samples";
  if (a.samples_opt->count() > 0) config["samples"] = a.samples;
  if (a.seed_opt->count() > 0) config["seed"] = a.seed;
  if (a.max_l_opt->count() > 0) config["max_l"] = a.max_l;
  if (a.max_f_opt->count() > 0) config["max_f"] = a.max_f;

  std::ostringstream os;
  os << emit.csv_header(config);
  os << "statement,n,instance,lhs,rhs,holds,asserted,note\n";
  std::size_t violations = 0;
  for (const AuditRow& row : rows) {
    const AuditReport& r = row.report;
    violations += row.asserted && !r.holds;
    os << csv_field(r.statement) << ',' << a.n << ',' << csv_field(r.instance) << ',' << csv_field(r.lhs_text()) << ','
       << csv_field(r.rhs_text) << ',' << (r.holds ? "true" : "false") << ',' << (row.asserted ? "true" : "false")
       << ',' << csv_field(r.note) << '\n';
  }
  emit.emit(a.out, os.str());
  err << a.statement << ": " << rows.size() << " checks, " << violations << " violations\n";
  return violations == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- fragments

struct FragmentArgs {
  std::string config;
  int n = 0;
  double C = 1.0;
  double c0 = 3.0;
  int k = 0;
  std::size_t w = 0;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t simulations = 10000;
  std::uint64_t node_limit = SearchBudget{}.node_limit;
  double time_limit = SearchBudget{}.time_limit;
  std::string out;
  std::map<std::string, CLI::Option*> opts;
};

struct ResolvedFragments {
  TwoRoundPlan plan;
  std::string c_text;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  Json config;
};

ResolvedFragments resolve_fragments(FragmentArgs a, std::string_view mode) {
  const auto given = [&](const std::string& name) { return a.opts.at(name)->count() > 0; };
  bool have_n = given("n");
  bool have_seed = given("seed");
  bool have_k = given("k");
  bool have_w = given("w");
  std::string c_text = given("C") ? a.opts.at("C")->as<std::string>() : std::string();
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw UsageError("fragments: cannot read config " + a.config);
    Json cfg;
    try {
      cfg = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("fragments: config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("fragments: config must be a JSON object");
    try {
      for (const auto& [key, value] : cfg.items()) {
        if (key == "n") {
          if (!have_n) a.n = value.get<int>(), have_n = true;
        } else if (key == "C") {
          if (c_text.empty()) c_text = value.is_string() ? value.get<std::string>() : format_double(value.get<double>());
        } else if (key == "c0_surrogate") {
          if (!given("c0_surrogate")) a.c0 = value.get<double>();
        } else if (key == "k") {
          if (!have_k) a.k = value.get<int>(), have_k = true;
        } else if (key == "w") {
          if (!have_w) a.w = value.get<std::size_t>(), have_w = true;
        } else if (key == "trials") {
          if (!given("trials")) a.trials = value.get<std::uint64_t>();
        } else if (key == "master_seed") {
          if (!have_seed) a.seed = value.get<std::uint64_t>(), have_seed = true;
        } else {
          throw UsageError("fragments: unknown config key '" + key + "'");
        }
      }
    } catch (const Json::type_error& e) {
      throw UsageError(std::string("fragments: config value has the wrong type: ") + e.what());
    }
  }
  if (!have_n) throw UsageError("fragments: --n (or config n) is required");
  if (!have_seed) throw UsageError("fragments: --seed (or config master_seed) is required");
  if (c_text.empty()) c_text = "1";
  const Rational c_exact = parse_decimal(c_text);
  const double C = to_double(c_exact);

  ResolvedFragments r;
  r.plan = TwoRoundPlan::make(a.n, a.c0, C, have_k ? std::optional<int>(a.k) : std::nullopt,
                              have_w ? std::optional<std::size_t>(a.w) : std::nullopt);
  r.c_text = c_text;
  r.trials = a.trials;
  r.seed = a.seed;
  r.config = base_config("fragments");
  r.config["mode"] = mode;
  r.config["n"] = r.plan.n;
  r.config["C"] = C;
  r.config["c0_surrogate"] = r.plan.c0_surrogate;
  r.config["k"] = r.plan.k;
  r.config["w"] = r.plan.w;
  r.config["trials"] = r.trials;
  r.config["master_seed"] = r.seed;
  return r;
}

Json proportion_json(const ProportionEstimate& p) {
  return Json{{"successes", p.successes}, {"trials", p.trials}, {"estimate", p.estimate}, {"lo", p.lo}, {"hi", p.hi}};
}

Json surd_json(const QuadSurd& x) { return Json{{"exact", x.str()}, {"value", x.to_double()}}; }

int run_fragments_census(const FragmentArgs& a, const Emitter& emit, const Globals& g) {
  const ResolvedFragments r = resolve_fragments(a, "census");
  const CopyCatalog catalog = enumerate_copies(r.plan.n);
  const BadPairCensus census = bad_pair_census(catalog, r.plan, r.trials, r.seed, g.threads);
  Json doc;
  doc["trials"] = census.trials;
  doc["good"] = census.good;
  doc["bad"] = census.bad;
  doc["unresolved"] = census.unresolved;
  doc["bad_fraction"] = proportion_json(census.bad_fraction);
  doc["lemma_bound"] = census.lemma_bound;
  doc["bad_by_overlap"] = census.bad_by_overlap;
  emit.stamp(doc, r.config);
  emit.emit(a.out, doc.dump(2) + "\n");
  return 0;
}

int run_fragments_two_round(const FragmentArgs& a, const Emitter& emit, const Globals& g, std::ostream& err) {
  ResolvedFragments r = resolve_fragments(a, "two-round");
  r.config["node_limit"] = a.node_limit;
  r.config["time_limit"] = a.time_limit;
  const CopyCatalog catalog = enumerate_copies(r.plan.n);
  const auto records =
      two_round_experiment(catalog, r.plan, r.trials, r.seed, SearchBudget{a.node_limit, a.time_limit}, g.threads);
  std::ostringstream os;
  os << emit.csv_header(r.config);
  os << "trial,w0_size,w0_successful,bad_pairs,family_size,X,solver_status,sound,seconds\n";
  std::size_t unsound = 0;
  for (const TwoRoundRecord& rec : records) {
    unsound += !rec.sound;
    os << rec.trial << ',' << rec.w0_size << ',' << (rec.w0_successful ? "true" : "false") << ',' << rec.bad_pairs
       << ',' << rec.family_size << ',' << rec.x << ',' << to_string(rec.solver_status) << ','
       << (rec.sound ? "true" : "false") << ',' << format_double(emit.seconds(rec.seconds)) << '\n';
  }
  emit.emit(a.out, os.str());
  if (unsound > 0) {
    err << "two-round: " << unsound << " trials with X > 0 but no copy found\n";
    return 1;
  }
  return 0;
}

int run_fragments_second_moment(const FragmentArgs& a, const Emitter& emit) {
  ResolvedFragments r = resolve_fragments(a, "second-moment");
  r.config["simulations"] = a.simulations;
  const CopyCatalog catalog = enumerate_copies(r.plan.n);
  RngStream w0_rng(r.seed, 0);
  const EdgeSet w0 = sample_gnp(r.plan.n, r.plan.p0, w0_rng).edges();
  const FragmentFamily family = build_fragment_family(catalog, w0, r.plan.k);
  const QuadSurd p1 = QuadSurd::over_sqrt(parse_decimal(r.c_text), static_cast<std::uint64_t>(r.plan.n));
  RngStream sim_rng(r.seed, 1);
  const SecondMomentReport rep = second_moment(family, p1, a.simulations, sim_rng);

  Json doc;
  doc["w0_size"] = w0.size();
  doc["examined"] = family.examined;
  doc["bad"] = family.bad;
  doc["w0_successful"] = family.successful();
  doc["family_size"] = rep.family_size;
  doc["p1"] = surd_json(p1);
  doc["mu"] = surd_json(rep.mu);
  doc["exact_mean"] = surd_json(rep.exact_mean);
  doc["exact_variance"] = surd_json(rep.exact_variance);
  doc["var_bound"] = surd_json(rep.var_bound);
  doc["chebyshev_bound"] = rep.chebyshev_bound ? surd_json(*rep.chebyshev_bound) : Json(nullptr);
  doc["pair_overlaps"] = rep.pair_overlaps;
  doc["simulations"] = rep.simulations;
  doc["empirical_p_x0"] = rep.empirical_p_x0;
  doc["empirical_p_x0_sigma"] = rep.empirical_p_x0_sigma;
  doc["empirical_mean"] = rep.empirical_mean;
  const bool within = rep.variance_within_bound();
  const bool chebyshev = !rep.chebyshev_bound || a.simulations == 0 || rep.chebyshev_consistent();
  doc["variance_within_bound"] = within;
  doc["chebyshev_consistent"] = chebyshev;
  emit.stamp(doc, r.config);
  emit.emit(a.out, doc.dump(2) + "\n");
  return within && chebyshev ? 0 : 1;
}

// ---------------------------------------------------------------- threshold

struct ThresholdArgs {
  std::string n_list;
  std::string c_list;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  bool coupled = false;
  int k = 2;
  std::uint64_t node_limit = SearchBudget{}.node_limit;
  double time_limit = SearchBudget{}.time_limit;
  std::string out;
  std::string fit_out;
  CLI::Option* seed_opt = nullptr;
};

int run_threshold(const ThresholdArgs& a, const Emitter& emit, const Globals& g) {
  if (a.seed_opt->count() == 0) throw UsageError("threshold: --seed is required");
  ThresholdGrid grid;
  grid.n_values = parse_list<int>(a.n_list, "--n-list");
  grid.c_values = parse_list<double>(a.c_list, "--c-list");
  grid.trials = a.trials;
  grid.budget = SearchBudget{a.node_limit, a.time_limit};
  grid.master_seed = a.seed;
  grid.coupled = a.coupled;
  grid.k = a.k;
  grid.threads = g.threads;
  grid.validate();
  const std::vector<CellResult> cells = run_grid(grid);

  Json config = base_config("threshold");
  config["n_list"] = grid.n_values;
  config["c_list"] = grid.c_values;
  config["trials"] = grid.trials;
  config["seed"] = grid.master_seed;
  config["coupled"] = grid.coupled;
  config["k"] = grid.k;
  config["node_limit"] = grid.budget.node_limit;
  config["time_limit"] = grid.budget.time_limit;

  std::ostringstream os;
  os << emit.csv_header(config);
  os << "n,C,p,trials,successes,failures,unknowns,estimate,ci_lo,ci_hi\n";
  for (const CellResult& c : cells) {
    os << c.n << ',' << format_double(c.C) << ',' << format_double(c.p) << ',' << c.trials << ',' << c.successes << ','
       << c.failures << ',' << c.unknowns << ',' << format_double(c.estimate.estimate) << ','
       << format_double(c.estimate.lo) << ',' << format_double(c.estimate.hi) << '\n';
  }
  emit.emit(a.out, os.str());

  Json fits = Json::array();
  const std::size_t per_n = grid.c_values.size();
  for (std::size_t i = 0; i < grid.n_values.size(); ++i) {
    const CrossingFit fit = fit_crossing(std::span<const CellResult>(cells).subspan(i * per_n, per_n));
    Json row;
    row["n"] = grid.n_values[i];
    row["C_half"] = fit.flag == FitFlag::no_fit ? Json(nullptr) : Json(fit.c_half);
    row["slope"] = fit.flag == FitFlag::no_fit ? Json(nullptr) : Json(fit.slope);
    row["flag"] = to_string(fit.flag);
    fits.push_back(std::move(row));
  }
  Json doc;
  doc["fits"] = std::move(fits);
  if (grid.coupled) doc["monotonicity_inversions"] = monotonicity_inversions(cells);
  emit.stamp(doc, config);
  emit.emit(a.fit_out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Square-of-Hamilton-cycle threshold lab", "sqham"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SQHAM_VERSION);

  Globals globals;
  app.add_option("--threads", globals.threads, "Worker threads for parallel loops")
      ->check(CLI::Range(1U, 1024U))
      ->capture_default_str();
  app.add_flag("--no-timestamp", globals.no_timestamp,
               "Omit the timestamp header and write timing fields as 0, so reruns are byte-identical");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a graph file");
  gen_cmd->fallthrough();
  gen_cmd->add_option("--n", gen.n, "Vertex count")->required();
  gen.p_opt = gen_cmd->add_option("--p", gen.p, "Edge probability for G(n, p)")->check(CLI::Range(0.0, 1.0));
  gen.m_opt = gen_cmd->add_option("--m", gen.m, "Edge count for G(n, m)");
  gen.power_opt = gen_cmd->add_option("--power", gen.power, "k-th power of the cycle 0, 1, ..., n-1")
                      ->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--complete", gen.complete, "Complete graph K_n");
  gen.seed_opt = gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--out", gen.out, "Output path (stdout if omitted)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Search a graph for the k-th power of a Hamilton cycle");
  solve_cmd->fallthrough();
  solve_cmd->add_option("--input", solve.input, "Graph file")->required();
  solve_cmd->add_option("--k", solve.k, "Power")->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Seed for value-ordering ties")->capture_default_str();
  solve_cmd->add_option("--node-limit", solve.node_limit, "Search node budget")->capture_default_str();
  solve_cmd->add_option("--time-limit", solve.time_limit, "Wall-clock budget in seconds")->capture_default_str();
  solve_cmd->add_flag("--no-pruning", solve.no_pruning, "Disable degree pruning");
  solve_cmd->add_option("--out", solve.out, "Output path (stdout if omitted)");

  CopiesArgs copies;
  auto* copies_cmd = app.add_subcommand("copies", "Count or list the copies of the k-th power of C_n in K_n");
  copies_cmd->fallthrough();
  copies_cmd->add_option("--n", copies.n, "Vertex count")->required();
  copies_cmd->add_option("--k", copies.k, "Power")->check(CLI::PositiveNumber)->capture_default_str();
  copies_cmd->add_option("--csv", copies.csv, "Write the catalog as CSV to this path");
  copies_cmd->add_flag("--enumerate", copies.enumerate, "Count by enumeration instead of the closed form");
  copies_cmd->add_option("--budget", copies.budget, "Maximum catalog size")->capture_default_str();

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Check an inequality exactly over a family of instances");
  audit_cmd->fallthrough();
  audit_cmd
      ->add_option("--statement", audit.statement,
                   "prop_easy | prop_easy2 | tree_lemma | subtree_formula | ivc | fi_bounds | fiand | spread_profile")
      ->required();
  audit_cmd->add_option("--n", audit.n, "Vertex count");
  audit_cmd->add_flag("--exhaustive", audit.exhaustive, "Check every instance");
  audit.samples_opt = audit_cmd->add_option("--samples", audit.samples, "Check this many random instances");
  audit.seed_opt = audit_cmd->add_option("--seed", audit.seed, "Master seed (required with --samples)");
  audit.max_l_opt = audit_cmd->add_option("--max-l", audit.max_l, "Largest instance size (edges, h or v)");
  audit.max_f_opt = audit_cmd->add_option("--max-f", audit.max_f, "prop_easy2: largest |F|");
  audit_cmd->add_option("--out", audit.out, "CSV output path (stdout if omitted)");

  FragmentArgs frag;
  auto* frag_cmd = app.add_subcommand("fragments", "Two-round exposure experiments");
  frag_cmd->fallthrough();
  frag_cmd->require_subcommand(1);
  frag_cmd->add_option("--config", frag.config, "JSON config {n, C, c0_surrogate, k, w, trials, master_seed}");
  frag.opts["n"] = frag_cmd->add_option("--n", frag.n, "Vertex count");
  frag.opts["C"] = frag_cmd->add_option("--C", frag.C, "Second-round constant, p1 = C / sqrt(n)");
  frag.opts["c0_surrogate"] = frag_cmd->add_option("--c0", frag.c0, "First-round constant, p0 = c0 / sqrt(n)");
  frag.opts["k"] = frag_cmd->add_option("--k", frag.k, "Fragment cutoff (default ceil(4 sqrt n))");
  frag.opts["w"] = frag_cmd->add_option("--w", frag.w, "First-round edge count for the census");
  frag.opts["trials"] = frag_cmd->add_option("--trials", frag.trials, "Trials");
  frag.opts["seed"] = frag_cmd->add_option("--seed", frag.seed, "Master seed");
  frag_cmd->add_option("--simulations", frag.simulations, "second-moment: W1 draws")->capture_default_str();
  frag_cmd->add_option("--node-limit", frag.node_limit, "two-round: solver node budget")->capture_default_str();
  frag_cmd->add_option("--time-limit", frag.time_limit, "two-round: solver time budget")->capture_default_str();
  frag_cmd->add_option("--out", frag.out, "Output path (stdout if omitted)");
  auto* census_cmd = frag_cmd->add_subcommand("census", "Bad-pair census over random (S, W)");
  auto* two_round_cmd = frag_cmd->add_subcommand("two-round", "End-to-end two-round trials (CSV log)");
  auto* second_cmd = frag_cmd->add_subcommand("second-moment", "Exact second moment of X for one W0");
  for (auto* sub : {census_cmd, two_round_cmd, second_cmd}) sub->fallthrough();

  ThresholdArgs thr;
  auto* thr_cmd = app.add_subcommand("threshold", "Monte Carlo containment probability over an (n, C) grid");
  thr_cmd->fallthrough();
  thr_cmd->add_option("--n-list", thr.n_list, "Comma-separated vertex counts")->required();
  thr_cmd->add_option("--c-list", thr.c_list, "Comma-separated increasing C values")->required();
  thr_cmd->add_option("--trials", thr.trials, "Trials per cell")->capture_default_str();
  thr.seed_opt = thr_cmd->add_option("--seed", thr.seed, "Master seed");
  thr_cmd->add_flag("--coupled", thr.coupled, "Share edge uniforms across C");
  thr_cmd->add_option("--k", thr.k, "Power")->check(CLI::PositiveNumber)->capture_default_str();
  thr_cmd->add_option("--node-limit", thr.node_limit, "Solver node budget per trial")->capture_default_str();
  thr_cmd->add_option("--time-limit", thr.time_limit, "Solver time budget per trial")->capture_default_str();
  thr_cmd->add_option("--out", thr.out, "Grid CSV path (stdout if omitted)");
  thr_cmd->add_option("--fit-out", thr.fit_out, "Fit JSON path (stdout if omitted)");

  std::vector<std::string> storage(args.begin(), args.end());
  std::vector<char*> argv;
  static char program[] = "sqham";
  argv.push_back(program);
  for (std::string& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << SQHAM_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  const Emitter emit(globals, out);
  try {
    if (gen_cmd->parsed()) return run_gen(gen, emit);
    if (solve_cmd->parsed()) return run_solve(solve, emit);
    if (copies_cmd->parsed()) return run_copies(copies, emit, out);
    if (audit_cmd->parsed()) return run_audit(audit, emit, err);
    if (census_cmd->parsed()) return run_fragments_census(frag, emit, globals);
    if (two_round_cmd->parsed()) return run_fragments_two_round(frag, emit, globals, err);
    if (second_cmd->parsed()) return run_fragments_second_moment(frag, emit);
    if (thr_cmd->parsed()) return run_threshold(thr, emit, globals);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace sqham::cli
