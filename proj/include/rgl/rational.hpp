// Exact fractions on 64-bit integers. Probability identities in the test
// harness are checked with zero tolerance, so no floating point here.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rgl {

class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

  static Rational from_int(long long n) { return Rational(n, 1); }

  // Accepts "0.3", ".5", "3/10" and plain integers. Decimal input is kept
  // exact: "0.3" becomes 3/10, not the nearest double.
  static Rational from_decimal(std::string_view text);

  long long num() const { return num_; }
  long long den() const { return den_; }

  double to_double() const { return double(num_) / double(den_); }
  std::string str() const;

  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ <= i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  // base^exp for exp >= 0, exact.
  static Rational pow_int(long long base, int exp);

 private:
  using i128 = __int128;

  static Rational make(i128 num, i128 den);
  void normalize();

  long long num_ = 0;
  long long den_ = 1;
};

inline Rational Rational::make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) { num = -num; den = -den; }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) { i128 t = a % b; a = b; b = t; }
  if (a != 0) { num /= a; den /= a; }
  const i128 lo = std::numeric_limits<long long>::min();
  const i128 hi = std::numeric_limits<long long>::max();
  if (num < lo || num > hi || den > hi)
    throw std::overflow_error("Rational: value does not fit 64 bits");
  Rational r;
  r.num_ = (long long)num;
  r.den_ = (long long)den;
  return r;
}

inline void Rational::normalize() {
  Rational r = make(num_, den_);
  num_ = r.num_;
  den_ = r.den_;
}

inline Rational Rational::pow_int(long long base, int exp) {
  if (exp < 0) throw std::domain_error("Rational::pow_int: negative exponent");
  i128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > std::numeric_limits<long long>::max())
      throw std::overflow_error("Rational::pow_int: overflow");
  }
  return Rational((long long)acc, 1);
}

inline Rational Rational::from_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    long long n = std::stoll(std::string(text.substr(0, slash)));
    long long d = std::stoll(std::string(text.substr(slash + 1)));
    return Rational(n, d);
  }
  bool neg = false;
  size_t i = 0;
  if (text[0] == '+' || text[0] == '-') { neg = text[0] == '-'; i = 1; }
  long long num = 0, den = 1;
  bool seen_dot = false, seen_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("Rational: bad decimal");
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("Rational: bad decimal");
    seen_digit = true;
    if (num > std::numeric_limits<long long>::max() / 10 - 9)
      throw std::overflow_error("Rational: decimal too long");
    num = num * 10 + (c - '0');
    if (seen_dot) {
      if (den > std::numeric_limits<long long>::max() / 10)
        throw std::overflow_error("Rational: decimal too long");
      den *= 10;
    }
  }
  if (!seen_digit) throw std::invalid_argument("Rational: bad decimal");
  return Rational(neg ? -num : num, den);
}

inline std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace rgl
