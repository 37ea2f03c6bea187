#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace selfedit {

// Exact rational arithmetic on int64 numerator / denominator.
//
// All probabilities and memory weights in the simulator are rationals so
// that runs replay bit-exactly. Results whose reduced numerator or
// denominator would overflow 32 bits are replaced by the best rational
// approximation with denominator <= 2^16 (continued-fraction convergents),
// which keeps long multiplicative weight updates bounded while staying
// exact in every regime the tests exercise.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (den_ == 0) throw std::invalid_argument("rational: zero denominator");
    normalize_small();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool negative() const { return num_ < 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ +
                 static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ -
                 static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.num_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return from_wide(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("rational: divide by zero");
    __int128 n = static_cast<__int128>(a.num_) * b.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.num_;
    return from_wide(n, d);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  static Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
  static Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

 private:
  static constexpr std::int64_t kMagnitudeLimit = std::int64_t(1) << 32;
  static constexpr std::int64_t kApproxDen = std::int64_t(1) << 16;

  void normalize_small() {
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    __int128 mag = n < 0 ? -n : n;
    if (mag <= kMagnitudeLimit && d <= kMagnitudeLimit) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
    return approximate(n, d);
  }

  // Best approximation with denominator <= kApproxDen, by continued
  // fraction convergents. Falls back to saturating when the value itself
  // is out of range.
  static Rational approximate(__int128 n, __int128 d) {
    bool neg = n < 0;
    if (neg) n = -n;
    if (n / d > static_cast<__int128>(kMagnitudeLimit)) {
      Rational r;
      r.num_ = neg ? -kMagnitudeLimit : kMagnitudeLimit;
      r.den_ = 1;
      return r;
    }
    __int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    __int128 a = n, b = d;
    while (b != 0) {
      __int128 t = a / b;
      __int128 p2 = t * p1 + p0;
      __int128 q2 = t * q1 + q0;
      if (q2 > kApproxDen) {
        // take the best semiconvergent still within the bound
        __int128 k = (kApproxDen - q0) / q1;
        __int128 sp = k * p1 + p0;
        __int128 sq = k * q1 + q0;
        Rational semi = make_checked(neg ? -sp : sp, sq);
        Rational conv = make_checked(neg ? -p1 : p1, q1);
        // choose whichever is closer to n/d (ties to the convergent)
        __int128 ed_semi = diff_abs(n, d, sp, sq);
        __int128 ed_conv = diff_abs(n, d, p1, q1);
        __int128 cross = ed_semi * (q1 > 0 ? q1 : 1);  // compare ed_semi/sq < ed_conv/q1
        __int128 cross2 = ed_conv * sq;
        return (q1 == 0 || cross < cross2) ? semi : conv;
      }
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      __int128 r = a % b;
      a = b; b = r;
    }
    return make_checked(neg ? -p1 : p1, q1);
  }

  static __int128 diff_abs(__int128 n, __int128 d, __int128 p, __int128 q) {
    __int128 v = n * q - p * d;
    return v < 0 ? -v : v;
  }

  static Rational make_checked(__int128 n, __int128 d) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d == 0 ? 1 : d);
    r.normalize_small();
    return r;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace selfedit
