#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqham/exact.hpp"
#include "sqham/solver.hpp"
#include "sqham/stats.hpp"

namespace sqham {

/// Cells are (n, C) with p = min(1, C / sqrt n).
struct ThresholdGrid {
  std::vector<int> n_values;
  std::vector<double> c_values;
  std::uint64_t trials = 100;
  SearchBudget budget;
  std::uint64_t master_seed = 0;
  /// Coupled mode draws one uniform per edge per (n, trial) and reuses it for
  /// every C, so per-trial outcomes are monotone in C.
  bool coupled = false;
  int k = 2;
  unsigned threads = 1;

  void validate() const;
};

/// Default ceiling on n for threshold runs; larger n is rejected.
inline constexpr int kThresholdMaxVertices = 48;

struct CellResult {
  int n = 0;
  double C = 0.0;
  double p = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t failures = 0;
  std::uint64_t unknowns = 0;
  /// Over resolved trials only.
  ProportionEstimate estimate;
  /// Per-trial status, indexed by trial.
  std::vector<SearchStatus> outcomes;
};

std::vector<CellResult> run_grid(const ThresholdGrid& grid);

/// Number of trials whose outcome goes from found at some C to not found at a
/// larger C (same n). Zero in coupled mode with an exact solver.
std::uint64_t monotonicity_inversions(std::span<const CellResult> cells);

enum class FitFlag { ok, low_confidence, extrapolated, no_fit };
std::string_view to_string(FitFlag f);

/// Logistic model P(success) = 1 / (1 + exp(-(intercept + slope * log C))),
/// fitted by maximum likelihood; C_half = exp(-intercept / slope).
struct CrossingFit {
  int n = 0;
  FitFlag flag = FitFlag::no_fit;
  double c_half = 0.0;
  double intercept = 0.0;
  double slope = 0.0;
  double deviance = 0.0;
  int iterations = 0;
};

CrossingFit fit_crossing(std::span<const CellResult> cells);

/// (n-1)! p^(kn) / 2, the expected number of copies of H_n^k in G(n, p).
/// Exact: a double p is a dyadic rational.
Rational first_moment(int n, double p, int k = 2);

struct FirstMomentPoint {
  int n = 0;
  /// Solves first_moment = 1 for k = 2: q = (2/(n-1)!)^(1/(2n)).
  HighFloat q;
  HighFloat q_sqrt_n;
  /// q sqrt(n) - sqrt(e)
  HighFloat gap_to_sqrt_e;
};

FirstMomentPoint first_moment_point(int n);

}  // namespace sqham
