#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "chaindiff/errors.hpp"

namespace chaindiff {

// Scalar that stays an exact int64 fraction as long as it can; arithmetic
// that would overflow (or any float input) demotes it to a plain double.
class Rational {
 public:
  Rational() : exact_(true), num_(0), den_(1), value_(0.0) {}

  static Rational integer(std::int64_t n) { return Rational(n, 1); }

  static Rational ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ArgumentError("rational with zero denominator");
    return Rational(num, den);
  }

  static Rational real(double v) {
    Rational r;
    r.exact_ = false;
    r.value_ = v;
    return r;
  }

  bool exact() const { return exact_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return exact_ ? static_cast<double>(num_) / static_cast<double>(den_) : value_; }

  bool is_zero() const { return exact_ ? num_ == 0 : value_ == 0.0; }
  bool is_one() const { return exact_ ? (num_ == 1 && den_ == 1) : value_ == 1.0; }
  bool is_integer() const { return exact_ && den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.exact_ && b.exact_) {
      __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
      __int128 d = static_cast<__int128>(a.den_) * b.den_;
      Rational r;
      if (normalize(n, d, r)) return r;
    }
    return real(a.value() + b.value());
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.exact_ && b.exact_) {
      __int128 n = static_cast<__int128>(a.num_) * b.num_;
      __int128 d = static_cast<__int128>(a.den_) * b.den_;
      Rational r;
      if (normalize(n, d, r)) return r;
    }
    return real(a.value() * b.value());
  }

  friend Rational operator-(const Rational& a) {
    if (a.exact_) return Rational(-a.num_, a.den_);
    return real(-a.value_);
  }

  Rational pow(int k) const {
    if (k < 0) throw ArgumentError("negative rational power");
    Rational acc = integer(1);
    for (int i = 0; i < k; ++i) acc = acc * *this;
    return acc;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.exact_ && b.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
    return a.exact_ == b.exact_ && a.value() == b.value();
  }

  // Total order usable for canonical sorting: numeric value first, exact
  // before inexact among value ties, then the normalized pair.
  friend int compare(const Rational& a, const Rational& b) {
    double av = a.value();
    double bv = b.value();
    if (av < bv) return -1;
    if (av > bv) return 1;
    if (a.exact_ != b.exact_) return a.exact_ ? -1 : 1;
    if (a.exact_) {
      if (a.num_ != b.num_) return a.num_ < b.num_ ? -1 : 1;
      if (a.den_ != b.den_) return a.den_ < b.den_ ? -1 : 1;
    }
    return 0;
  }

  std::string str() const {
    if (!exact_) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", value_);
      return buf;
    }
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  Rational(std::int64_t num, std::int64_t den) : exact_(true), value_(0.0) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
  }

  static bool normalize(__int128 n, __int128 d, Rational& out) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    if (g == 0) g = 1;
    n /= g;
    d /= g;
    const __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) return false;
    out.exact_ = true;
    out.num_ = static_cast<std::int64_t>(n);
    out.den_ = static_cast<std::int64_t>(d);
    out.value_ = 0.0;
    return true;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  bool exact_;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double value_;
};

}  // namespace chaindiff
