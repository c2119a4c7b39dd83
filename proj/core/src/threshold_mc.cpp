#include "sqham/threshold_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sqham/graph.hpp"
#include "sqham/spread_audit.hpp"

namespace sqham {

namespace mp = boost::multiprecision;

namespace {

double cell_probability(int n, double C) { return std::min(1.0, C / std::sqrt(static_cast<double>(n))); }

std::uint64_t coupled_stream(int n, std::uint64_t trial) { return (static_cast<std::uint64_t>(n) << 40) | trial; }

std::uint64_t cell_stream(int n, std::size_t c_index, std::uint64_t trial) {
  return (static_cast<std::uint64_t>(n) << 56) | (static_cast<std::uint64_t>(c_index) << 40) | trial;
}

}  // namespace

void ThresholdGrid::validate() const {
  if (n_values.empty() || c_values.empty()) throw std::invalid_argument("ThresholdGrid: empty n or C list");
  for (int n : n_values) {
    if (n < 3 || n > kThresholdMaxVertices) {
      throw std::invalid_argument("ThresholdGrid: n = " + std::to_string(n) + " outside [3, " +
                                  std::to_string(kThresholdMaxVertices) + "]");
    }
  }
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    if (!(c_values[i] >= 0.0) || !std::isfinite(c_values[i])) throw std::invalid_argument("ThresholdGrid: C must be finite and >= 0");
    if (i > 0 && !(c_values[i] > c_values[i - 1])) throw std::invalid_argument("ThresholdGrid: C values must be strictly increasing");
  }
  if (trials < 1) throw std::invalid_argument("ThresholdGrid: trials must be >= 1");
  if (k < 1) throw std::invalid_argument("ThresholdGrid: k must be >= 1");
  if (budget.node_limit == 0 || !(budget.time_limit > 0.0)) throw std::invalid_argument("ThresholdGrid: budgets must be positive");
}

std::vector<CellResult> run_grid(const ThresholdGrid& grid) {
  grid.validate();
  const std::size_t cs = grid.c_values.size();
  std::vector<CellResult> cells;
  for (int n : grid.n_values) {
    for (double C : grid.c_values) {
      CellResult cell;
      cell.n = n;
      cell.C = C;
      cell.p = cell_probability(n, C);
      cell.trials = grid.trials;
      cell.outcomes.assign(grid.trials, SearchStatus::budget_unknown);
      cells.push_back(std::move(cell));
    }
  }

  const std::size_t units = grid.n_values.size() * grid.trials * (grid.coupled ? 1 : cs);
  parallel_for(units, grid.threads, [&](std::size_t unit) {
    if (grid.coupled) {
      const std::size_t ni = unit / grid.trials;
      const std::uint64_t t = unit % grid.trials;
      const int n = grid.n_values[ni];
      RngStream rng(grid.master_seed, coupled_stream(n, t));
      std::vector<double> uniforms(pair_count(n));
      for (double& u : uniforms) u = rng.uniform();
      for (std::size_t ci = 0; ci < cs; ++ci) {
        CellResult& cell = cells[ni * cs + ci];
        EdgeSet edges(n);
        for (std::size_t e = 0; e < uniforms.size(); ++e) {
          if (uniforms[e] < cell.p) edges.insert_index(e);
        }
        RngStream solver_rng = rng.substream(ci);
        cell.outcomes[t] = find_power_ham(Graph(std::move(edges)), grid.k, grid.budget, solver_rng).status;
      }
    } else {
      const std::size_t ni = unit / (grid.trials * cs);
      const std::size_t ci = (unit / grid.trials) % cs;
      const std::uint64_t t = unit % grid.trials;
      const int n = grid.n_values[ni];
      CellResult& cell = cells[ni * cs + ci];
      RngStream rng(grid.master_seed, cell_stream(n, ci, t));
      const Graph g = sample_gnp(n, cell.p, rng);
      RngStream solver_rng = rng.substream(0);
      cell.outcomes[t] = find_power_ham(g, grid.k, grid.budget, solver_rng).status;
    }
  });

  for (CellResult& cell : cells) {
    for (SearchStatus s : cell.outcomes) {
      if (s == SearchStatus::found) ++cell.successes;
      else if (s == SearchStatus::exhausted_no) ++cell.failures;
      else ++cell.unknowns;
    }
    cell.estimate = wilson(cell.successes, cell.successes + cell.failures);
  }
  return cells;
}

std::uint64_t monotonicity_inversions(std::span<const CellResult> cells) {
  std::uint64_t inversions = 0;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = 0; b < cells.size(); ++b) {
      if (cells[a].n != cells[b].n || !(cells[a].C < cells[b].C)) continue;
      const std::size_t trials = std::min(cells[a].outcomes.size(), cells[b].outcomes.size());
      for (std::size_t t = 0; t < trials; ++t) {
        inversions += cells[a].outcomes[t] == SearchStatus::found && cells[b].outcomes[t] == SearchStatus::exhausted_no;
      }
    }
  }
  return inversions;
}

std::string_view to_string(FitFlag f) {
  switch (f) {
    case FitFlag::ok:
      return "ok";
    case FitFlag::low_confidence:
      return "low_confidence";
    case FitFlag::extrapolated:
      return "extrapolated";
    case FitFlag::no_fit:
      return "no_fit";
  }
  return "unknown";
}

namespace {

struct Point {
  double x;
  double successes;
  double trials;
};

double log_likelihood(const std::vector<Point>& pts, double a, double b) {
  double ll = 0.0;
  for (const Point& p : pts) {
    const double eta = a + b * p.x;
    // log sigma(eta) and log(1 - sigma(eta)) without overflow
    const double log_p = -std::log1p(std::exp(-std::abs(eta))) + std::min(eta, 0.0);
    const double log_q = -std::log1p(std::exp(-std::abs(eta))) + std::min(-eta, 0.0);
    ll += p.successes * log_p + (p.trials - p.successes) * log_q;
  }
  return ll;
}

}  // namespace

CrossingFit fit_crossing(std::span<const CellResult> cells) {
  CrossingFit fit;
  if (!cells.empty()) fit.n = cells.front().n;
  std::vector<Point> pts;
  double lo_c = std::numeric_limits<double>::infinity();
  double hi_c = 0.0;
  double total_s = 0.0;
  double total_t = 0.0;
  int interior = 0;
  for (const CellResult& c : cells) {
    if (c.n != fit.n) throw std::invalid_argument("fit_crossing: cells from several n");
    const double resolved = static_cast<double>(c.successes + c.failures);
    if (!(c.C > 0.0) || resolved == 0.0) continue;
    pts.push_back(Point{std::log(c.C), static_cast<double>(c.successes), resolved});
    lo_c = std::min(lo_c, c.C);
    hi_c = std::max(hi_c, c.C);
    total_s += static_cast<double>(c.successes);
    total_t += resolved;
    interior += c.successes > 0 && c.failures > 0;
  }
  if (pts.size() < 2 || total_s == 0.0 || total_s == total_t) return fit;

  // Newton-Raphson with step halving on the log-likelihood.
  double a = 0.0;
  double b = 1.0;
  {
    double mean_x = 0.0;
    for (const Point& p : pts) mean_x += p.x * p.trials;
    a = -b * mean_x / total_t;
  }
  double ll = log_likelihood(pts, a, b);
  bool converged = false;
  for (int iter = 1; iter <= 100; ++iter) {
    fit.iterations = iter;
    double ga = 0.0, gb = 0.0, haa = 0.0, hab = 0.0, hbb = 0.0;
    for (const Point& p : pts) {
      const double mu = 1.0 / (1.0 + std::exp(-(a + b * p.x)));
      const double r = p.successes - p.trials * mu;
      const double w = p.trials * mu * (1.0 - mu);
      ga += r;
      gb += r * p.x;
      haa += w;
      hab += w * p.x;
      hbb += w * p.x * p.x;
    }
    const double det = haa * hbb - hab * hab;
    if (!(std::abs(det) > 1e-300)) break;
    double da = (hbb * ga - hab * gb) / det;
    double db = (haa * gb - hab * ga) / det;
    double step = 1.0;
    double next_ll = log_likelihood(pts, a + da, b + db);
    while (next_ll < ll - 1e-12 && step > 1e-8) {
      step /= 2;
      next_ll = log_likelihood(pts, a + step * da, b + step * db);
    }
    a += step * da;
    b += step * db;
    const double change = std::abs(next_ll - ll);
    ll = next_ll;
    if (std::abs(step * da) < 1e-12 && std::abs(step * db) < 1e-12 && change < 1e-12) {
      converged = true;
      break;
    }
    if (std::abs(b) > 1e6) break;  // separable data: the MLE runs off to infinity
  }
  if (!converged || b == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    fit.flag = FitFlag::no_fit;
    return fit;
  }
  fit.intercept = a;
  fit.slope = b;
  fit.c_half = std::exp(-a / b);
  fit.deviance = 0.0;
  for (const Point& p : pts) {
    const double mu = 1.0 / (1.0 + std::exp(-(a + b * p.x)));
    const auto term = [](double obs, double exp_) { return obs > 0.0 ? obs * std::log(obs / exp_) : 0.0; };
    fit.deviance += 2.0 * (term(p.successes, p.trials * mu) + term(p.trials - p.successes, p.trials * (1.0 - mu)));
  }
  if (fit.c_half < lo_c || fit.c_half > hi_c) {
    fit.flag = FitFlag::extrapolated;
  } else if (interior < 4) {
    fit.flag = FitFlag::low_confidence;
  } else {
    fit.flag = FitFlag::ok;
  }
  return fit;
}

namespace {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite probability");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r(scaled);
  if (exponent >= 0) {
    r *= Rational(BigInt(1) << exponent);
  } else {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

}  // namespace

Rational first_moment(int n, double p, int k) {
  if (n < 3) throw std::invalid_argument("first_moment: need n >= 3");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("first_moment: p must lie in [0, 1]");
  return Rational(count_copies(n)) * pow(rational_from_double(p), static_cast<unsigned>(k * n));
}

FirstMomentPoint first_moment_point(int n) {
  FirstMomentPoint pt;
  pt.n = n;
  pt.q = spread_params(n).q;
  pt.q_sqrt_n = pt.q * mp::sqrt(HighFloat(n));
  pt.gap_to_sqrt_e = pt.q_sqrt_n - mp::sqrt(mp::exp(HighFloat(1)));
  return pt;
}

}  // namespace sqham
