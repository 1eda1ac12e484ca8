#pragma once

// Truncated Puiseux series in q^{1/D} with exact rational coefficients.
//
// A Series is a finite sparse map k -> c meaning sum c q^{k/D}, together
// with an order Θ: every coefficient at an exponent below Θ is known
// exactly, nothing is known at or above it. Zero coefficients are never
// stored and every stored exponent lies strictly below Θ.
//
// Order rule for products: min(Θa, Θb), without crediting positive
// valuations. A factor with negative valuation v lowers the other
// operand's contribution to Θ + v, since that is all that is known.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace nahmforge {

class Series {
 public:
  using Terms = std::map<std::int64_t, Rational>;

  explicit Series(FracExp order, std::int64_t D = 1) : D_(D), order_(order) {
    if (D_ < 1) throw std::domain_error("series denominator must be positive");
  }

  static Series monomial(FracExp e, const Rational& c, FracExp order) {
    if (!(e < order)) throw EmptySeriesError("monomial q^" + e.str() + " lies at or above order " + order.str());
    Series s(order, e.den());
    if (c != 0) s.terms_.emplace(e.num(), c);
    return s;
  }
  // Dense integer coefficients; dense[i] belongs to exponent (first + i)/D.
  static Series from_dense(std::int64_t D, std::int64_t first, const std::vector<Integer>& dense, FracExp order) {
    Series s(order, D);
    const std::int64_t K = order.ceil_scaled(D);
    for (std::size_t i = 0; i < dense.size(); ++i) {
      const std::int64_t k = first + static_cast<std::int64_t>(i);
      if (k >= K) break;
      if (dense[i] != 0) s.terms_.emplace_hint(s.terms_.end(), k, Rational(dense[i]));
    }
    return s;
  }
  static Series constant(const Rational& c, FracExp order) { return monomial(0, c, order); }
  static Series one(FracExp order) { return constant(1, order); }

  // Builds from (exponent numerator over D, coefficient) pairs; entries at or
  // above the order and zero entries are dropped, duplicates are summed.
  static Series from_terms(std::int64_t D, FracExp order, const std::vector<std::pair<std::int64_t, Rational>>& items) {
    Series s(order, D);
    std::int64_t K = order.ceil_scaled(D);
    for (const auto& [k, c] : items)
      if (k < K) s.add_to(k, c);
    return s;
  }

  std::int64_t denom() const { return D_; }
  FracExp order() const { return order_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::optional<FracExp> valuation() const {
    if (terms_.empty()) return std::nullopt;
    return FracExp(terms_.begin()->first, D_);
  }
  // Valuation, or the order when nothing below it is nonzero.
  FracExp valuation_or_order() const { return terms_.empty() ? order_ : FracExp(terms_.begin()->first, D_); }

  Rational coeff(FracExp e) const {
    if (!(e < order_)) throw std::domain_error("coefficient at q^" + e.str() + " is beyond the order " + order_.str());
    if (D_ % e.den() != 0) return 0;
    auto it = terms_.find(e.num() * (D_ / e.den()));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::vector<std::pair<FracExp, Rational>> items() const {
    std::vector<std::pair<FracExp, Rational>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(FracExp(k, D_), c);
    return out;
  }

  // Same value over a multiple of the current denominator.
  Series rebased(std::int64_t D) const {
    if (D % D_ != 0) throw std::domain_error("rebase target must be a multiple of the denominator");
    if (D == D_) return *this;
    Series s(order_, D);
    const std::int64_t f = D / D_;
    for (const auto& [k, c] : terms_) s.terms_.emplace_hint(s.terms_.end(), k * f, c);
    return s;
  }

  // Smallest denominator that represents every stored exponent.
  Series canonical() const {
    std::int64_t g = D_;
    for (const auto& [k, c] : terms_) g = std::gcd(g, k);
    if (g <= 1) return *this;
    Series s(order_, D_ / g);
    for (const auto& [k, c] : terms_) s.terms_.emplace_hint(s.terms_.end(), k / g, c);
    return s;
  }

  Series truncated(FracExp order) const {
    FracExp o = min(order, order_);
    Series s(o, D_);
    const std::int64_t K = o.ceil_scaled(D_);
    for (const auto& [k, c] : terms_) {
      if (k >= K) break;
      s.terms_.emplace_hint(s.terms_.end(), k, c);
    }
    return s;
  }

  // Exact multiplication by q^e; the order moves with it.
  Series shifted(FracExp e) const {
    const std::int64_t D = lcm64(D_, e.den());
    Series s(order_ + e, D);
    const std::int64_t f = D / D_, sh = e.num() * (D / e.den());
    for (const auto& [k, c] : terms_) s.terms_.emplace_hint(s.terms_.end(), k * f + sh, c);
    return s;
  }

  Series scaled(const Rational& c) const {
    Series s(order_, D_);
    if (c == 0) return s;
    for (const auto& [k, v] : terms_) s.terms_.emplace_hint(s.terms_.end(), k, v * c);
    return s;
  }

  // Substitution q -> q^m for m > 0.
  Series dilated(FracExp m) const {
    if (!(FracExp(0) < m)) throw std::domain_error("dilation factor must be positive");
    const std::int64_t D = D_ * m.den();
    Series s(order_ * m, D);
    for (const auto& [k, c] : terms_) s.terms_.emplace_hint(s.terms_.end(), k * m.num(), c);
    return s;
  }

  // Substitution q^{1/D} -> -q^{1/D} applied to integral exponents only:
  // each term picks up (-1)^{exponent}. Requires every stored exponent to
  // be an integer.
  Series sign_alternated() const {
    Series s(order_, D_);
    for (const auto& [k, c] : terms_) {
      if (k % D_ != 0) throw std::domain_error("q -> -q needs integral exponents");
      s.terms_.emplace_hint(s.terms_.end(), k, ((k / D_) % 2 == 0) ? c : Rational(-c));
    }
    return s;
  }

  friend Series operator-(const Series& a) { return a.scaled(-1); }

  friend Series operator+(const Series& a, const Series& b) {
    const std::int64_t D = lcm64(a.D_, b.D_);
    const FracExp o = min(a.order_, b.order_);
    const std::int64_t K = o.ceil_scaled(D);
    Series s(o, D);
    const std::int64_t fa = D / a.D_, fb = D / b.D_;
    for (const auto& [k, c] : a.terms_) {
      if (k * fa >= K) break;
      s.terms_.emplace_hint(s.terms_.end(), k * fa, c);
    }
    for (const auto& [k, c] : b.terms_) {
      if (k * fb >= K) break;
      s.add_to(k * fb, c);
    }
    return s;
  }
  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  friend Series operator*(const Series& a, const Series& b) {
    const std::int64_t D = lcm64(a.D_, b.D_);
    const FracExp va = a.valuation_or_order(), vb = b.valuation_or_order();
    FracExp o = min(a.order_, b.order_);
    if (vb < FracExp(0)) o = min(o, a.order_ + vb);
    if (va < FracExp(0)) o = min(o, b.order_ + va);
    Series s(o, D);
    if (a.is_zero() || b.is_zero()) return s;

    const std::int64_t K = o.ceil_scaled(D);
    const std::int64_t fa = D / a.D_, fb = D / b.D_;
    std::vector<std::pair<std::int64_t, const Rational*>> A, B;
    A.reserve(a.terms_.size());
    B.reserve(b.terms_.size());
    for (const auto& [k, c] : a.terms_) A.emplace_back(k * fa, &c);
    for (const auto& [k, c] : b.terms_) B.emplace_back(k * fb, &c);
    const std::int64_t base = A.front().first + B.front().first;
    if (base >= K) return s;

    std::vector<Rational> acc(static_cast<std::size_t>(K - base));
    std::vector<char> touched(acc.size(), 0);
    Rational t;
    for (const auto& [ka, ca] : A) {
      if (ka + B.front().first >= K) break;
      for (const auto& [kb, cb] : B) {
        const std::int64_t k = ka + kb;
        if (k >= K) break;
        mpq_mul(t.get_mpq_t(), ca->get_mpq_t(), cb->get_mpq_t());
        acc[k - base] += t;
        touched[k - base] = 1;
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (touched[i] && acc[i] != 0) s.terms_.emplace_hint(s.terms_.end(), base + static_cast<std::int64_t>(i), std::move(acc[i]));
    return s;
  }

  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  std::string str() const;

 private:
  void add_to(std::int64_t k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::int64_t D_ = 1;
  FracExp order_;
  Terms terms_;
};

inline std::string exponent_text(FracExp e) {
  if (e == FracExp(1)) return "q";
  if (e.den() == 1) return "q^" + e.str();
  return "q^(" + e.str() + ")";
}

inline std::string Series::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    FracExp e(k, D_);
    Rational mag = abs(c);
    const bool neg = c < 0;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (e == FracExp(0)) {
      os << to_string(mag);
    } else {
      if (mag != 1) os << to_string(mag) << "*";
      os << exponent_text(e);
    }
  }
  if (first) os << "0";
  os << " + O(" << exponent_text(order_) << ")";
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Series& s) { return os << s.str(); }

inline Series neg(const Series& a) { return -a; }

// Multiplicative inverse. For valuation v the result has valuation -v and
// order Θ - 2v.
inline Series invert(const Series& a) {
  const auto v = a.valuation();
  if (!v) throw NonInvertibleError("series is zero to order " + a.order().str());
  const Rational c0 = a.terms().begin()->second;
  const Series u = a.shifted(-*v);  // unit part, known below Θ - v
  const std::int64_t D = u.denom();
  const std::int64_t K = u.order().ceil_scaled(D);
  std::vector<std::pair<std::int64_t, Rational>> U;
  for (const auto& [k, c] : u.terms())
    if (k > 0) U.emplace_back(k, c / c0);
  std::vector<Rational> b(static_cast<std::size_t>(std::max<std::int64_t>(K, 0)));
  if (!b.empty()) b[0] = 1;
  Rational t;
  for (std::int64_t k = 1; k < K; ++k) {
    Rational acc;
    for (const auto& [i, ui] : U) {
      if (i > k) break;
      if (b[k - i] == 0) continue;
      mpq_mul(t.get_mpq_t(), ui.get_mpq_t(), b[k - i].get_mpq_t());
      acc -= t;
    }
    b[k] = std::move(acc);
  }
  std::vector<std::pair<std::int64_t, Rational>> items;
  const Rational inv0 = 1 / c0;
  for (std::int64_t k = 0; k < K; ++k)
    if (b[k] != 0) items.emplace_back(k, b[k] * inv0);
  return Series::from_terms(D, u.order(), items).shifted(-*v);
}

inline Series pow(const Series& a, long n) {
  if (n < 0) return pow(invert(a), -n);
  Series result = Series::one(a.order());
  Series base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

// Square root of a series with valuation 0 and constant term 1.
inline Series sqrt_unit(const Series& a) {
  const auto v = a.valuation();
  if (!v || *v != FracExp(0) || a.terms().begin()->second != 1)
    throw std::domain_error("square root needs a series starting 1 + ...");
  const std::int64_t D = a.denom();
  const std::int64_t K = a.order().ceil_scaled(D);
  std::vector<Rational> s(static_cast<std::size_t>(K));
  s[0] = 1;
  for (std::int64_t k = 1; k < K; ++k) {
    Rational acc;
    auto it = a.terms().find(k);
    if (it != a.terms().end()) acc = it->second;
    for (std::int64_t i = 1; i < k; ++i)
      if (s[i] != 0 && s[k - i] != 0) acc -= s[i] * s[k - i];
    s[k] = acc / 2;
  }
  std::vector<std::pair<std::int64_t, Rational>> items;
  for (std::int64_t k = 0; k < K; ++k)
    if (s[k] != 0) items.emplace_back(k, s[k]);
  return Series::from_terms(D, a.order(), items);
}

namespace detail {

// prod_{i < count} (1 - s * sigma^i * q^{e + i t}) for e > 0, as a dense
// integer expansion; count < 0 means "all factors below the order".
inline Series pochhammer_dense(FracExp e, int s, FracExp t, int sigma, std::int64_t count, FracExp order) {
  const std::int64_t D = lcm64(e.den(), t.den());
  const std::int64_t K = order.ceil_scaled(D);
  if (K <= 0) return Series(order, D);
  std::vector<Integer> c(static_cast<std::size_t>(K));
  c[0] = 1;
  const std::int64_t e0 = e.num() * (D / e.den()), step = t.num() * (D / t.den());
  std::int64_t top = 0;  // highest possibly nonzero index
  int sign = s;
  for (std::int64_t i = 0; count < 0 || i < count; ++i) {
    const std::int64_t x = e0 + i * step;
    if (x >= K) break;
    // c <- c - sign * q^x c, walking downwards so each c[k-x] is still old
    const std::int64_t hi = std::min(K - 1, top + x);
    for (std::int64_t k = hi; k >= x; --k) {
      if (c[k - x] == 0) continue;
      if (sign > 0)
        c[k] -= c[k - x];
      else
        c[k] += c[k - x];
    }
    top = hi;
    sign *= sigma;
  }
  return Series::from_dense(D, 0, c, order);
}

inline Series binomial_product(Series acc, FracExp x, int s) {
  // acc * (1 - s q^x), exact factor
  return acc - acc.shifted(x).scaled(s);
}

}  // namespace detail

// prod_{i=0}^{n-1} (1 - s q^{e + i t}).
inline Series pochhammer_finite(FracExp e, int s, FracExp t, std::int64_t n, FracExp order) {
  if (!(FracExp(0) < t)) throw std::domain_error("Pochhammer step must be positive");
  if (s != 1 && s != -1) throw std::domain_error("Pochhammer sign must be +1 or -1");
  if (n < 0) throw std::domain_error("finite Pochhammer length must be non-negative");
  if (FracExp(0) < e) return detail::pochhammer_dense(e, s, t, 1, n, order);
  Series acc = Series::one(order);
  for (std::int64_t i = 0; i < n; ++i) acc = detail::binomial_product(acc, e + FracExp(i) * t, s);
  return acc;
}

// prod_{i>=0} (1 - s q^{e + i t}).
inline Series pochhammer_infinite(FracExp e, int s, FracExp t, FracExp order) {
  if (!(FracExp(0) < e)) throw DivergentProductError("infinite Pochhammer with base exponent " + e.str() + " <= 0");
  if (!(FracExp(0) < t)) throw std::domain_error("Pochhammer step must be positive");
  if (s != 1 && s != -1) throw std::domain_error("Pochhammer sign must be +1 or -1");
  return detail::pochhammer_dense(e, s, t, 1, -1, order);
}

// (s q^e; -q^m)_inf = prod_{n>=0} (1 - s (-1)^n q^{e + m n}).
inline Series alt_pochhammer_infinite(FracExp e, int s, FracExp m, FracExp order) {
  if (!(FracExp(0) < e)) throw DivergentProductError("infinite Pochhammer with base exponent " + e.str() + " <= 0");
  if (!(FracExp(0) < m)) throw std::domain_error("Pochhammer step must be positive");
  if (s != 1 && s != -1) throw std::domain_error("Pochhammer sign must be +1 or -1");
  return detail::pochhammer_dense(e, s, m, -1, -1, order);
}

struct Mismatch {
  FracExp exponent;
  Rational lhs;
  Rational rhs;
};

struct Comparison {
  bool equal = true;
  FracExp checked_order;
  std::optional<Mismatch> mismatch;
  explicit operator bool() const { return equal; }
  std::string str() const {
    if (equal) return "equal below " + exponent_text(checked_order);
    return "differ at " + exponent_text(mismatch->exponent) + ": " + to_string(mismatch->lhs) + " vs " +
           to_string(mismatch->rhs);
  }
};

inline Comparison series_equal(const Series& a, const Series& b) {
  const FracExp o = min(a.order(), b.order());
  const Series diff = (a - b).truncated(o);
  Comparison r;
  r.checked_order = o;
  if (diff.is_zero()) return r;
  const FracExp e(diff.terms().begin()->first, diff.denom());
  r.equal = false;
  r.mismatch = Mismatch{e, a.coeff(e), b.coeff(e)};
  return r;
}

}  // namespace nahmforge
