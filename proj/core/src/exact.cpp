#include "sqham/exact.hpp"

#include <sstream>
#include <stdexcept>

namespace sqham {

namespace mp = boost::multiprecision;

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::invalid_argument("binomial: negative n");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt falling(std::int64_t x, std::int64_t j) {
  if (j < 0) throw std::invalid_argument("falling: negative length");
  BigInt r = 1;
  for (std::int64_t i = 0; i < j; ++i) r *= BigInt(x - i);
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

HighFloat to_high(const Rational& r) {
  return HighFloat(mp::numerator(r)) / HighFloat(mp::denominator(r));
}

double to_double(const Rational& r) { return to_high(r).convert_to<double>(); }

std::string to_decimal(const HighFloat& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::string to_decimal(const Rational& r, int digits) {
  if (mp::denominator(r) == 1) return mp::numerator(r).str();
  return to_decimal(to_high(r), digits);
}

const RationalInterval& e_enclosure() {
  // sum_{j>N} 1/j! < 1/(N! N)
  static const RationalInterval enclosure = [] {
    constexpr unsigned kTerms = 30;
    Rational sum = 0;
    BigInt fact = 1;
    for (unsigned j = 0; j <= kTerms; ++j) {
      if (j > 0) fact *= j;
      sum += Rational(BigInt(1), fact);
    }
    return RationalInterval{sum, sum + Rational(BigInt(1), fact * kTerms)};
  }();
  return enclosure;
}

namespace {

// Splits d into s^2 * d' with d' squarefree.
std::pair<std::uint64_t, std::uint64_t> square_split(std::uint64_t d) {
  std::uint64_t s = 1;
  for (std::uint64_t p = 2; p * p <= d; ++p) {
    while (d % (p * p) == 0) {
      d /= p * p;
      s *= p;
    }
  }
  return {s, d};
}

}  // namespace

QuadSurd::QuadSurd(Rational a) : a_(std::move(a)) {}

QuadSurd::QuadSurd(Rational a, Rational b, std::uint64_t radicand)
    : a_(std::move(a)), b_(std::move(b)), d_(radicand) {
  if (radicand == 0) {
    b_ = 0;
    d_ = 1;
  }
  normalize();
}

QuadSurd QuadSurd::over_sqrt(const Rational& c, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("over_sqrt: zero radicand");
  return QuadSurd(0, c / n, n);
}

void QuadSurd::normalize() {
  auto [s, rest] = square_split(d_);
  b_ *= s;
  d_ = rest;
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
  if (b_ == 0) d_ = 1;
}

void QuadSurd::unify(const QuadSurd& o) {
  if (o.b_ == 0 || d_ == o.d_) return;
  if (b_ == 0) {
    d_ = o.d_;
    return;
  }
  throw std::invalid_argument("QuadSurd: mixed radicands");
}

int QuadSurd::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const Rational a2 = a_ * a_;
  const Rational b2d = b_ * b_ * d_;
  return a2 > b2d ? sa : sb;
}

QuadSurd& QuadSurd::operator+=(const QuadSurd& o) {
  unify(o);
  a_ += o.a_;
  b_ += o.b_;
  if (b_ == 0) d_ = 1;
  return *this;
}

QuadSurd& QuadSurd::operator-=(const QuadSurd& o) {
  unify(o);
  a_ -= o.a_;
  b_ -= o.b_;
  if (b_ == 0) d_ = 1;
  return *this;
}

QuadSurd& QuadSurd::operator*=(const QuadSurd& o) {
  unify(o);
  const std::uint64_t d = d_;
  Rational a = a_ * o.a_ + b_ * o.b_ * d;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  if (b_ == 0) d_ = 1;
  return *this;
}

QuadSurd& QuadSurd::operator/=(const QuadSurd& o) {
  unify(o);
  const Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d_;
  if (norm == 0) throw std::domain_error("QuadSurd: division by zero");
  QuadSurd conj(o.a_ / norm, -o.b_ / norm, d_);
  return *this *= conj;
}

HighFloat QuadSurd::to_high() const {
  HighFloat r = sqham::to_high(a_);
  if (b_ != 0) r += sqham::to_high(b_) * boost::multiprecision::sqrt(HighFloat(d_));
  return r;
}

double QuadSurd::to_double() const { return to_high().convert_to<double>(); }

std::string QuadSurd::str() const {
  if (b_ == 0) return a_.str();
  std::ostringstream os;
  os << a_.str() << (b_.sign() < 0 ? " - " : " + ") << Rational(mp::abs(b_)).str() << "*sqrt(" << d_ << ")";
  return os.str();
}

QuadSurd pow(const QuadSurd& base, unsigned exponent) {
  QuadSurd result(Rational(1));
  QuadSurd b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

}  // namespace sqham
