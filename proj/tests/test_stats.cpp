#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "sqham/stats.hpp"

using namespace sqham;

TEST_CASE("wilson interval") {
  const ProportionEstimate none = wilson(0, 0);
  CHECK(none.lo == 0.0);
  CHECK(none.hi == 1.0);

  const ProportionEstimate half = wilson(5, 10);
  CHECK(half.estimate == 0.5);
  CHECK(half.lo == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(half.hi == doctest::Approx(0.7634).epsilon(1e-3));

  const ProportionEstimate zero = wilson(0, 50);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi == doctest::Approx(1.96 * 1.96 / (50 + 1.96 * 1.96)));
  CHECK_THROWS(wilson(3, 2));
}

TEST_CASE("running stats") {
  RunningStats s;
  for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) s.push(x);
  CHECK(s.count() == 8);
  CHECK(s.mean() == doctest::Approx(5.0));
  CHECK(s.variance() == doctest::Approx(32.0 / 7.0));
  CHECK(s.standard_error() == doctest::Approx(std::sqrt(32.0 / 7.0 / 8.0)));
}

TEST_CASE("parallel_for visits every index once for any thread count") {
  for (unsigned threads : {1U, 2U, 4U, 9U}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
