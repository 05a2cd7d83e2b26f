#pragma once

// Overflow-checked 64-bit integer arithmetic and exact rationals.

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lenslat {

using Int = std::int64_t;

namespace checked {

inline Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
  return r;
}

inline Int sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in subtraction");
  return r;
}

inline Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
  return r;
}

inline Int neg(Int a) { return sub(0, a); }

inline Int narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("integer overflow");
  return static_cast<Int>(v);
}

}  // namespace checked

inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

inline Int mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

struct ExtGcd {
  Int g, x, y;  // g = x*a + y*b, g >= 0
};

inline ExtGcd ext_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = checked::sub(old_s, checked::mul(q, s));
    old_s = s;
    s = tmp;
    tmp = checked::sub(old_t, checked::mul(q, t));
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator. Every operation
/// is carried out in 128-bit intermediates and throws std::overflow_error if
/// the reduced result does not fit back into 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(Int n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(Int n, Int d) { assign(n, d); }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  Int floor() const { return floor_div(num_, den_); }
  Int ceil() const { return ceil_div(num_, den_); }

  Rational operator-() const { return make(-static_cast<__int128>(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return make(static_cast<__int128>(a.num_) + b.num_, a.den_);
    Int g = std::gcd(a.den_, b.den_);
    __int128 n = static_cast<__int128>(a.num_) * (b.den_ / g) + static_cast<__int128>(b.num_) * (a.den_ / g);
    __int128 d = static_cast<__int128>(a.den_ / g) * b.den_;
    return make(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Int g1 = std::gcd(a.num_, b.den_);
    Int g2 = std::gcd(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    __int128 n = static_cast<__int128>(a.num_ / g1) * (b.num_ / g2);
    __int128 d = static_cast<__int128>(a.den_ / g2) * (b.den_ / g1);
    return make(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * b.inverse();
  }

  Rational inverse() const {
    if (num_ == 0) throw std::domain_error("inverse of zero");
    return num_ < 0 ? Rational::raw(-den_, -num_) : Rational::raw(den_, num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

  /// "num/den", always with the slash ("0/1", "-1/4").
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  /// Accepts "n", "n/d" or "-n/d".
  static Rational parse(std::string_view s) {
    auto slash = s.find('/');
    auto to_int = [](std::string_view t) -> Int {
      if (t.empty()) throw std::invalid_argument("empty integer");
      std::size_t used = 0;
      long long v = std::stoll(std::string(t), &used);
      if (used != t.size()) throw std::invalid_argument("bad integer '" + std::string(t) + "'");
      return v;
    };
    if (slash == std::string_view::npos) return Rational(to_int(s));
    Int d = to_int(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return Rational(to_int(s.substr(0, slash)), d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    if (r.den_ == 1) return os << r.num_;
    return os << r.num_ << '/' << r.den_;
  }

 private:
  static Rational raw(Int n, Int d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }

  static Rational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    return raw(checked::narrow(n), checked::narrow(d));
  }

  void assign(Int n, Int d) {
    if (d == 0) throw std::domain_error("zero denominator");
    *this = make(n, d);
  }

  Int num_ = 0;
  Int den_ = 1;
};

}  // namespace lenslat
