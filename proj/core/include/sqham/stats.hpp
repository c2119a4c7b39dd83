#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace sqham {

struct ProportionEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval; z = 1.96 gives the usual 95% interval.
ProportionEstimate wilson(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

/// Welford running mean / variance.
class RunningStats {
 public:
  void push(double x);
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // sample variance
  double standard_error() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is
/// handed out by index, so results stored per index do not depend on the
/// worker count.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace sqham
