#pragma once

// Exact scalars and fractional exponents.
//
// Rational is GMP's mpq_class; all arithmetic on it keeps the value in
// canonical form (reduced, positive denominator). FracExp is a small
// machine-word fraction used for q-exponents, which never grow large.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nahmforge {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "a", "-a", "a/b".
inline Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
  if (q.get_den() == 0) throw std::domain_error("rational with zero denominator");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline long to_long(const Rational& q) {
  if (!is_integer(q) || !q.get_num().fits_slong_p())
    throw std::domain_error("rational " + to_string(q) + " is not a machine integer");
  return q.get_num().get_si();
}

// Floor and fractional part, valid for negative values too.
inline Integer floor_of(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

inline Rational frac_part(const Rational& q) { return q - Rational(floor_of(q)); }

class FracExp {
 public:
  constexpr FracExp() = default;
  FracExp(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {  // NOLINT implicit from integers
    if (den_ == 0) throw std::domain_error("exponent with zero denominator");
    normalize();
  }
  explicit FracExp(const Rational& q) {
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p())
      throw std::domain_error("exponent out of machine range");
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  Rational to_rational() const { return make_rational(num_, den_); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Smallest integer k with k/D >= *this.
  std::int64_t ceil_scaled(std::int64_t D) const {
    __int128 n = static_cast<__int128>(num_) * D;
    __int128 q = n / den_;
    if (q * den_ < n) ++q;
    return static_cast<std::int64_t>(q);
  }
  // k/D < *this  <=>  k < ceil_scaled(D)
  bool exceeds(std::int64_t k, std::int64_t D) const { return k < ceil_scaled(D); }

  friend FracExp operator+(FracExp a, FracExp b) {
    std::int64_t g = std::gcd(a.den_, b.den_);
    return {a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_};
  }
  friend FracExp operator-(FracExp a) { return {-a.num_, a.den_}; }
  friend FracExp operator-(FracExp a, FracExp b) { return a + (-b); }
  friend FracExp operator*(FracExp a, FracExp b) {
    std::int64_t g1 = std::gcd(a.num_, b.den_), g2 = std::gcd(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return {(a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1)};
  }
  FracExp& operator+=(FracExp o) { return *this = *this + o; }
  FracExp& operator-=(FracExp o) { return *this = *this - o; }

  friend bool operator==(FracExp a, FracExp b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(FracExp a, FracExp b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, FracExp e) { return os << e.str(); }

 private:
  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      num_ = -num_;
    }
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline FracExp min(FracExp a, FracExp b) { return b < a ? b : a; }
inline FracExp max(FracExp a, FracExp b) { return a < b ? b : a; }

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace nahmforge
