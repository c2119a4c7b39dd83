#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace sqham {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
/// 50 decimal digits; used where a value is irrational and only reported.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

BigInt factorial(unsigned n);

/// C(n, k); zero when k < 0 or k > n. Throws for n < 0.
BigInt binomial(std::int64_t n, std::int64_t k);

/// Falling factorial (x)_j = x (x-1) ... (x-j+1); (x)_0 = 1.
BigInt falling(std::int64_t x, std::int64_t j);

Rational pow(const Rational& base, unsigned exponent);

HighFloat to_high(const Rational& r);
double to_double(const Rational& r);

/// Decimal rendering with `digits` significant digits.
std::string to_decimal(const Rational& r, int digits = 30);
std::string to_decimal(const HighFloat& x, int digits = 30);

/// Closed rational enclosure of a real number.
struct RationalInterval {
  Rational lo;
  Rational hi;
};

/// Enclosure of Euler's number of width below 1e-33.
const RationalInterval& e_enclosure();

/// An element a + b*sqrt(d) of the quadratic field Q(sqrt d).
///
/// Arithmetic between values with different radicands is rejected unless one
/// of them is rational (b = 0). Perfect-square radicands are folded into the
/// rational part on construction, so sign() is exact in all cases.
class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(Rational a);  // NOLINT: implicit from rationals is intended
  QuadSurd(Rational a, Rational b, std::uint64_t radicand);

  /// c / sqrt(n), written as (c/n) * sqrt(n).
  static QuadSurd over_sqrt(const Rational& c, std::uint64_t n);

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  std::uint64_t radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const;
  double to_double() const;
  HighFloat to_high() const;
  std::string str() const;

  QuadSurd& operator+=(const QuadSurd& o);
  QuadSurd& operator-=(const QuadSurd& o);
  QuadSurd& operator*=(const QuadSurd& o);
  QuadSurd& operator/=(const QuadSurd& o);

  friend QuadSurd operator+(QuadSurd l, const QuadSurd& r) { return l += r; }
  friend QuadSurd operator-(QuadSurd l, const QuadSurd& r) { return l -= r; }
  friend QuadSurd operator*(QuadSurd l, const QuadSurd& r) { return l *= r; }
  friend QuadSurd operator/(QuadSurd l, const QuadSurd& r) { return l /= r; }
  QuadSurd operator-() const { return QuadSurd(-a_, -b_, d_); }

  friend bool operator==(const QuadSurd& l, const QuadSurd& r) { return (l - r).sign() == 0; }
  friend bool operator<(const QuadSurd& l, const QuadSurd& r) { return (l - r).sign() < 0; }
  friend bool operator<=(const QuadSurd& l, const QuadSurd& r) { return (l - r).sign() <= 0; }
  friend bool operator>(const QuadSurd& l, const QuadSurd& r) { return (l - r).sign() > 0; }

 private:
  void unify(const QuadSurd& o);
  void normalize();

  Rational a_{0};
  Rational b_{0};
  std::uint64_t d_ = 1;
};

QuadSurd pow(const QuadSurd& base, unsigned exponent);

}  // namespace sqham
