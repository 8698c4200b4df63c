#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pcm {

using BigInt = boost::multiprecision::cpp_int;

/// Error type used by the whole library for precondition and input failures.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Exact rational number. Stored in lowest terms with a positive
/// denominator; every operation is exact, there is no floating point
/// anywhere in the library.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(int v) : num_(v), den_(1) {}
  Rational(BigInt v) : num_(std::move(v)), den_(1) {}
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw error("rational with zero denominator");
    normalize();
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  // Lowest-terms representation makes equality structural.
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << to_string(r);
  }

  /// Renders `num/den` in lowest terms, integers without the `/1`.
  friend std::string to_string(const Rational& r) {
    std::string s = r.num_.str();
    if (r.den_ != 1) s += "/" + r.den_.str();
    return s;
  }

private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  BigInt num_;
  BigInt den_;
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// r^n for integer n >= 0.
inline Rational pow(const Rational& r, std::size_t n) {
  Rational acc = 1;
  for (std::size_t i = 0; i < n; ++i) acc *= r;
  return acc;
}

namespace detail {
inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}
} // namespace detail

/// Parses an exact fraction literal: `[-]digits` or `[-]digits/digits`.
/// Anything else, in particular any floating-point spelling, is rejected.
inline Rational rat_parse(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string_view numpart = s, denpart;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    numpart = s.substr(0, slash);
    denpart = s.substr(slash + 1);
    if (denpart.empty() || !detail::all_digits(denpart))
      throw error("malformed rational literal '" + std::string(text) + "'");
  }
  if (!detail::all_digits(numpart))
    throw error("malformed rational literal '" + std::string(text) + "'");
  BigInt num{std::string(numpart)};
  BigInt den = denpart.empty() ? BigInt(1) : BigInt{std::string(denpart)};
  if (den == 0) throw error("zero denominator in '" + std::string(text) + "'");
  if (neg) num = -num;
  return Rational(std::move(num), std::move(den));
}

} // namespace pcm
