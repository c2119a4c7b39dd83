#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sqham/exact.hpp"

using namespace sqham;

TEST_CASE("factorial and binomial agree with Pascal's triangle") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(factorial(25) == oracle::factorial(25));
  for (int n = 0; n <= 40; ++n) {
    for (int k = -2; k <= n + 2; ++k) CHECK(binomial(n, k) == oracle::pascal(n, k));
  }
  CHECK_THROWS_AS(binomial(-1, 0), std::invalid_argument);
}

TEST_CASE("falling factorial") {
  CHECK(falling(7, 0) == 1);
  CHECK(falling(7, 3) == 210);
  CHECK(falling(5, 5) == 120);
  CHECK(falling(5, 6) == 0);
}

TEST_CASE("rational power and decimal rendering") {
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow(Rational(5), 0) == 1);
  CHECK(to_decimal(Rational(1, 8), 10) == "0.125");
  CHECK(to_double(Rational(1, 3)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("e enclosure brackets e tightly") {
  const RationalInterval& e = e_enclosure();
  CHECK(e.lo < e.hi);
  CHECK(to_double(e.lo) <= std::exp(1.0));
  CHECK(to_double(e.hi) >= std::exp(1.0));
  CHECK(to_double(e.hi - e.lo) < 1e-30);
}

TEST_CASE("QuadSurd normalizes square factors") {
  const QuadSurd a(Rational(0), Rational(1), 8);  // sqrt 8 = 2 sqrt 2
  CHECK(a.radicand() == 2);
  CHECK(a.surd_part() == 2);
  const QuadSurd b(Rational(0), Rational(3), 9);  // 3 sqrt 9 = 9
  CHECK(b.is_rational());
  CHECK(b.rational_part() == 9);
}

TEST_CASE("QuadSurd arithmetic matches floating point") {
  const QuadSurd p = QuadSurd::over_sqrt(Rational(2), 8);  // 2 / sqrt 8 = 1 / sqrt 2
  CHECK(p.to_double() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(p * p == QuadSurd(Rational(1, 2)));
  CHECK(pow(p, 4) == QuadSurd(Rational(1, 4)));
  const QuadSurd q(Rational(1, 3), Rational(-2, 5), 2);
  const QuadSurd r = (p + q) * (p - q) / (q * q + Rational(1));
  const double pd = p.to_double();
  const double qd = q.to_double();
  CHECK(r.to_double() == doctest::Approx((pd + qd) * (pd - qd) / (qd * qd + 1)));
}

TEST_CASE("QuadSurd sign is exact near zero") {
  // 99/70 is a convergent of sqrt 2; the difference is about 7e-5.
  const QuadSurd d(Rational(99, 70), Rational(-1), 2);
  CHECK(d.sign() > 0);
  const QuadSurd e(Rational(140, 99), Rational(-1), 2);
  CHECK(e.sign() < 0);
  CHECK(QuadSurd(Rational(0)).sign() == 0);
}

TEST_CASE("QuadSurd rejects mixed radicands") {
  const QuadSurd a(Rational(0), Rational(1), 2);
  const QuadSurd b(Rational(0), Rational(1), 3);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_NOTHROW(a + QuadSurd(Rational(5)));
}
