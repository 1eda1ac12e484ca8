#pragma once

// Bailey pairs relative to a = q^{a_exp}:
//
//   beta_n = sum_{r=0}^n alpha_r / ((q;q)_{n-r} (aq;q)_{n+r})
//
// Pairs are sequences of exact series, memoized per index. The two limits of
// Bailey's lemma used here (S1 and the summed form) and the a -> a/q shift
// act on those sequences directly.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "descending.hpp"
#include "products.hpp"
#include "series.hpp"

namespace nahmforge {

class BaileyPair {
 public:
  using Fn = std::function<Series(long n, FracExp order)>;

  BaileyPair(FracExp a_exp, Fn alpha, Fn beta, std::string label)
      : a_exp_(a_exp), label_(std::move(label)), impl_(std::make_shared<Impl>()) {
    impl_->alpha = std::move(alpha);
    impl_->beta = std::move(beta);
  }

  FracExp a_exp() const { return a_exp_; }
  const std::string& label() const { return label_; }

  Series alpha(long n, FracExp order) const {
    if (n < 0) return Series(order);
    return lookup(impl_->alpha_cache, impl_->alpha, n, order);
  }
  Series beta(long n, FracExp order) const { return lookup(impl_->beta_cache, impl_->beta, n, order); }

 private:
  struct Impl {
    Fn alpha, beta;
    std::map<long, Series> alpha_cache, beta_cache;
  };

  static Series lookup(std::map<long, Series>& cache, const Fn& f, long n, FracExp order) {
    auto it = cache.find(n);
    if (it != cache.end() && !(it->second.order() < order)) return it->second.truncated(order);
    // a term asked for below q^1 is still evaluated to q^1: cheap, and keeps
    // zero results from dragging the order of their products down
    Series v = f(n, max(order, FracExp(1)));
    cache.insert_or_assign(n, v);
    return v.truncated(order);
  }

  FracExp a_exp_;
  std::string label_;
  std::shared_ptr<Impl> impl_;
};

namespace detail {

inline Series mono(FracExp e, const Rational& c, FracExp order) {
  return e < order ? Series::monomial(e, c, order) : Series(order, e.den());
}

inline Series unit(FracExp order) { return mono(FracExp(0), 1, order); }

// 1 / prod_{k<n} (1 - s q^{e + k t})
inline Series inv_poch(FracExp e, int s, FracExp t, long n, FracExp order) {
  if (!(FracExp(0) < order)) return Series(order);
  return invert(pochhammer_finite(e, s, t, n, order));
}

// num / (1 - q^x), x > 0, expanded far enough to absorb num's negative part
inline Series over_binomial(const Series& num, FracExp x, FracExp order) {
  const FracExp slack = abs_neg(num.valuation_or_order()) + FracExp(1);
  const FracExp w = max(order + slack, FracExp(1));
  const Series den = unit(w) - mono(x, 1, w);
  return (num * invert(den)).truncated(order);
}

inline Rational sign_of(long n) { return (n % 2 == 0) ? Rational(1) : Rational(-1); }

inline FracExp half_binom(long n) { return FracExp(n * (n - 1), 4); }  // binom(n,2)/2

}  // namespace detail

// ---------------------------------------------------------------------------
// Catalogue

inline const std::vector<std::string>& catalogue_tags() {
  static const std::vector<std::string> tags = {"C1", "C3",  "C4", "C4*", "C5",   "C6", "C7", "C7*", "G1",
                                                "G1*", "G2", "G4", "G4*", "G4**", "G5", "W1", "W2"};
  return tags;
}

inline BaileyPair catalogue(const std::string& tag) {
  using detail::inv_poch;
  using detail::mono;
  using detail::over_binomial;
  using detail::sign_of;
  const FracExp one(1), two(2), half(1, 2);
  // q^{lead(n)} / ((q;q)_n (q^{odd_start};q^2)_n)
  auto beta_c = [=](std::function<FracExp(long)> lead, FracExp odd_start) {
    return [=](long n, FracExp o) {
      const FracExp e = lead(n);
      if (!(e < o)) return Series(o);
      return (inv_poch(one, 1, one, n, o - e) * inv_poch(odd_start, 1, two, n, o - e)).shifted(e);
    };
  };
  // (-1)^n q^{lead} / ((-q^{x};q)_n (q^2;q^2)_n)
  auto beta_g = [=](std::function<FracExp(long)> lead, bool alternating, FracExp x) {
    return [=](long n, FracExp o) {
      const FracExp e = lead(n);
      if (!(e < o)) return Series(o, e.den());
      Series s = (inv_poch(x, -1, one, n, o - e) * inv_poch(two, 1, two, n, o - e)).shifted(e);
      return alternating && n % 2 ? -s : s;
    };
  };
  auto zero_n = [](long) { return FracExp(0); };

  if (tag == "C1" || tag == "C5" || tag == "W1") {
    const long qa = tag == "C1" ? 3 : tag == "C5" ? 1 : 3;  // q^{qa m^2}
    const long lin = tag == "W1" ? 3 : 1;                    // (q^{lin m} + q^{-lin m})
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      if (n == 0) return detail::unit(o);
      if (n % 2) return Series(o);
      const long m = n / 2;
      const Rational s = sign_of(m);
      return mono(FracExp(qa * m * m + lin * m), s, o) + mono(FracExp(qa * m * m - lin * m), s, o);
    };
    BaileyPair::Fn beta;
    if (tag == "C1") beta = beta_c(zero_n, one);
    if (tag == "C5") beta = beta_c([](long n) { return FracExp(n * (n - 1), 2); }, one);
    if (tag == "W1")
      beta = [=](long n, FracExp o) {
        // (q^n (1 + q^{-1}) - q^{2n-1}) / ((q;q)_n (q;q^2)_n)
        const FracExp w = o + one;
        const Series num = mono(FracExp(n), 1, w) + mono(FracExp(n - 1), 1, w) - mono(FracExp(2 * n - 1), 1, w);
        return (num * inv_poch(one, 1, one, n, w) * inv_poch(one, 1, two, n, w)).truncated(o);
      };
    return BaileyPair(FracExp(0), alpha, beta, tag);
  }
  if (tag == "C3" || tag == "C4" || tag == "C6" || tag == "C7") {
    // alpha_{2m} = (-1)^m q^{E(m)}, alpha_{2m+1} = (-1)^{m+1} q^{O(m)}
    std::function<long(long)> even, odd;
    std::function<FracExp(long)> lead = zero_n;
    if (tag == "C3") {
      even = [](long m) { return 3 * m * m + m; };
      odd = [](long m) { return 3 * m * m + 5 * m + 2; };
    } else if (tag == "C4") {
      even = [](long m) { return 3 * m * m + 3 * m; };
      odd = even;
      lead = [](long n) { return FracExp(n); };
    } else if (tag == "C6") {
      even = [](long m) { return m * m - m; };
      odd = [](long m) { return m * m + 3 * m + 2; };
      lead = [](long n) { return FracExp(n * (n - 1), 2); };
    } else {
      even = [](long m) { return m * m + m; };
      odd = even;
      lead = [](long n) { return FracExp(n * (n + 1), 2); };
    }
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      const long m = n / 2;
      if (n % 2 == 0) return mono(FracExp(even(m)), sign_of(m), o);
      return mono(FracExp(odd(m)), sign_of(m + 1), o);
    };
    return BaileyPair(one, alpha, beta_c(lead, FracExp(3)), tag);
  }
  if (tag == "C4*" || tag == "C7*") {
    const bool four = tag == "C4*";
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      if (n % 2) return Series(o);
      const long m = n / 2;
      const FracExp e = four ? FracExp(3 * m * m + m) : FracExp(m * m - m);
      // (-1)^m q^e (1 - q^{4m+2}) / (1 - q^2)
      const FracExp w = o + one;
      const Series num = mono(e, sign_of(m), w) - mono(e + FracExp(4 * m + 2), sign_of(m), w);
      return over_binomial(num, two, o);
    };
    std::function<FracExp(long)> lead = four ? std::function<FracExp(long)>(zero_n)
                                             : [](long n) { return FracExp(n * (n - 1), 2); };
    return BaileyPair(two, alpha, beta_c(lead, FracExp(3)), tag);
  }
  if (tag == "G1" || tag == "G4" || tag == "G4*") {
    // alpha_n = (-1)^n q^{E(n)} (1 + q^{F(n)}), alpha_0 = 1
    std::function<FracExp(long)> E, F, lead;
    bool alternating = false;
    if (tag == "G1") {
      E = [](long n) { return FracExp(n * n, 2) + detail::half_binom(n); };
      F = [](long n) { return FracExp(n, 2); };
      lead = zero_n;
    } else if (tag == "G4") {
      E = [](long n) { return detail::half_binom(n); };
      F = [](long n) { return FracExp(n, 2); };
      lead = [](long n) { return FracExp(n * n, 2); };
      alternating = true;
    } else {
      E = [](long n) { return detail::half_binom(n) - FracExp(n, 2); };
      F = [](long n) { return FracExp(3 * n, 2); };
      lead = [](long n) { return FracExp(n * n, 2) - FracExp(n); };
      alternating = true;
    }
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      if (n == 0) return detail::unit(o);
      return mono(E(n), sign_of(n), o) + mono(E(n) + F(n), sign_of(n), o);
    };
    return BaileyPair(FracExp(0), alpha, beta_g(lead, alternating, half), tag);
  }
  if (tag == "G1*" || tag == "G2") {
    const bool star = tag == "G1*";
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      // (-1)^n q^{(3/2) binom(n+1,2)} (q^{-n} - q^{n+1}) / (1 - q)          [G1*]
      // (-1)^n q^{(3/2) binom(n+1,2)} (q^{-n/2} - q^{(n+1)/2}) / (1 - q^{1/2}) [G2]
      const FracExp base(3 * n * (n + 1), 4), w = o + FracExp(n + 2);
      const FracExp lo = star ? FracExp(-n) : FracExp(-n, 2), hi = star ? FracExp(n + 1) : FracExp(n + 1, 2);
      const Series num = mono(base + lo, sign_of(n), w) - mono(base + hi, sign_of(n), w);
      return over_binomial(num, star ? one : half, o);
    };
    return BaileyPair(one, alpha, beta_g(zero_n, false, star ? half : FracExp(3, 2)), tag);
  }
  if (tag == "G4**") {
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      // (-1)^n q^{n^2/4 - 3n/4} (1 - q^{2n+1}) / (1 - q)
      const FracExp e(n * n - 3 * n, 4), w = o + two;
      const Series num = mono(e, sign_of(n), w) - mono(e + FracExp(2 * n + 1), sign_of(n), w);
      return over_binomial(num, one, o);
    };
    return BaileyPair(one, alpha, beta_g([](long n) { return FracExp(n * n, 2) - FracExp(n); }, true, half), tag);
  }
  if (tag == "G5") {
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      // (-1)^n q^{binom(n,2)/2} (1 - q^{n+1/2}) / (1 - q^{1/2})
      const FracExp e = detail::half_binom(n), w = o + one;
      const Series num = mono(e, sign_of(n), w) - mono(e + FracExp(2 * n + 1, 2), sign_of(n), w);
      return over_binomial(num, half, o);
    };
    return BaileyPair(one, alpha, beta_g([](long n) { return FracExp(n * n, 2); }, true, FracExp(3, 2)), tag);
  }
  if (tag == "W2" || tag == "W2-printed") {
    BaileyPair::Fn alpha = [=](long n, FracExp o) {
      // (-1)^n q^{3(n^2-n)/4} (1 - q^{3n+3/2}) / (1 - q^{1/2})
      const FracExp e(3 * n * n - 3 * n, 4), w = o + one;
      const Series num = mono(e, sign_of(n), w) - mono(e + FracExp(6 * n + 3, 2), sign_of(n), w);
      return over_binomial(num, half, o);
    };
    // q^n (1 + q + q^{n+1/2}) / ((-q^{3/2};q)_n (q^2;q^2)_n). The "-printed"
    // variant keeps (q;q^2)_n in place of (q^2;q^2)_n; it is not a pair.
    const FracExp even_start = tag == "W2" ? two : one;
    BaileyPair::Fn beta = [=](long n, FracExp o) {
      const FracExp e(n);
      if (!(e < o)) return Series(o, 2);
      const Series num = detail::unit(o) + mono(one, 1, o) + mono(FracExp(2 * n + 1, 2), 1, o);
      return (num.truncated(o - e) * inv_poch(FracExp(3, 2), -1, one, n, o - e) *
              inv_poch(even_start, 1, two, n, o - e))
          .shifted(e);
    };
    return BaileyPair(one, alpha, beta, tag);
  }
  throw std::invalid_argument("unknown Bailey pair '" + tag + "'");
}

// alpha_n = [n = 0], beta_n = 1 / ((q;q)_n (aq;q)_n)
inline BaileyPair unit_pair(FracExp a_exp) {
  BaileyPair::Fn alpha = [](long n, FracExp o) { return n == 0 ? detail::unit(o) : Series(o); };
  BaileyPair::Fn beta = [a_exp](long n, FracExp o) {
    return detail::inv_poch(FracExp(1), 1, FracExp(1), n, o) * detail::inv_poch(a_exp + FracExp(1), 1, FracExp(1), n, o);
  };
  return BaileyPair(a_exp, alpha, beta, "unit");
}

// ---------------------------------------------------------------------------
// Defining relation

struct PairReport {
  bool ok = true;
  long n = -1;  // first failing index
  std::optional<Mismatch> mismatch;
  std::string str() const {
    if (ok) return "pair relation holds";
    return "fails at n=" + std::to_string(n) + ": coefficient of " + exponent_text(mismatch->exponent) + " is " +
           to_string(mismatch->lhs) + " in beta vs " + to_string(mismatch->rhs) + " from alpha";
  }
};

// sum_{r<=n} alpha_r / ((q;q)_{n-r} (aq;q)_{n+r}) below `order`
inline Series bailey_convolution(const BaileyPair& p, long n, FracExp order) {
  const FracExp a1 = p.a_exp() + FracExp(1);
  Series acc(order);
  for (long r = 0; r <= n; ++r) {
    const Series al = p.alpha(r, order);
    const FracExp v = al.valuation_or_order();
    if (!(v < order)) continue;
    // the negative part of alpha's valuation eats into the factor's order
    const FracExp w = order + abs_neg(v);
    const Series f = detail::inv_poch(FracExp(1), 1, FracExp(1), n - r, w) * detail::inv_poch(a1, 1, FracExp(1), n + r, w);
    acc += (al * f).truncated(order);
  }
  return acc;
}

inline PairReport verify_pair(const BaileyPair& p, long n_max, FracExp order) {
  PairReport rep;
  for (long n = 0; n <= n_max; ++n) {
    const Comparison c = series_equal(p.beta(n, order), bailey_convolution(p, n, order));
    if (!c) {
      rep.ok = false;
      rep.n = n;
      rep.mismatch = c.mismatch;
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Transformations

// alpha'_n = a^n q^{n^2} alpha_n,  beta'_n = sum_r a^r q^{r^2} beta_r / (q;q)_{n-r}
inline BaileyPair transform_S1(const BaileyPair& p) {
  const FracExp a = p.a_exp();
  BaileyPair::Fn alpha = [p, a](long n, FracExp o) {
    const FracExp e = a * FracExp(n) + FracExp(n * n);
    // alpha may have a negative valuation; ask for enough of it
    return p.alpha(n, o - e + FracExp(1)).shifted(e).truncated(o);
  };
  BaileyPair::Fn beta = [p, a](long n, FracExp o) {
    Series acc(o);
    for (long r = 0; r <= n; ++r) {
      const FracExp e = a * FracExp(r) + FracExp(r * r);
      if (!(e - FracExp(2) < o)) break;
      const FracExp w = o - e + FracExp(2);
      const Series b = p.beta(r, w);
      const FracExp slack = abs_neg(b.valuation_or_order());
      acc += (b * detail::inv_poch(FracExp(1), 1, FracExp(1), n - r, w + slack)).shifted(e).truncated(o);
    }
    return acc;
  };
  return BaileyPair(a, alpha, beta, "S1(" + p.label() + ")");
}

// relative to a/q: alpha'_n = (1-a)(q^n alpha_n/(1-aq^{2n}) - q^{n-1} alpha_{n-1}/(1-aq^{2n-2})), beta'_n = q^n beta_n
inline BaileyPair transform_shift(const BaileyPair& p) {
  const FracExp a = p.a_exp();
  if (!(FracExp(0) < a)) throw std::domain_error("shift needs a = q^k with k > 0; at a = 1 the factor 1 - a vanishes");
  if (a < FracExp(1)) throw std::domain_error("shift needs a_exp >= 1 so that a/q stays a power series parameter");
  BaileyPair::Fn alpha = [p, a](long n, FracExp o) {
    const FracExp w = o + FracExp(2);
    auto part = [&](long k) {
      // (1 - a) q^k alpha_k / (1 - a q^{2k})
      if (k < 0) return Series(w);
      const Series num = (detail::unit(w) - detail::mono(a, 1, w)) * p.alpha(k, w + FracExp(1)).shifted(FracExp(k));
      return detail::over_binomial(num.truncated(w), a + FracExp(2 * k), w);
    };
    return (part(n) - part(n - 1)).truncated(o);
  };
  BaileyPair::Fn beta = [p](long n, FracExp o) {
    const FracExp e(n);
    return p.beta(n, o - e + FracExp(1)).shifted(e).truncated(o);
  };
  return BaileyPair(a - FracExp(1), alpha, beta, "shift(" + p.label() + ")");
}

// ---------------------------------------------------------------------------
// Limits

enum class LimitMode { BetaLimit, Summed };

struct LimitResult {
  Series lhs, rhs, alpha_sum;
  long n_star = -1;  // beta index certified as the limit (BetaLimit mode)
  long terms = 0;    // terms summed on the beta side (Summed mode)
};

// BetaLimit: lim beta_n = (sum alpha_r) / ((q;q)_inf (aq;q)_inf).
// Summed:    sum a^n q^{n^2} beta_n = (sum a^n q^{n^2} alpha_n) / (aq;q)_inf.
inline LimitResult bailey_limit(const BaileyPair& p, FracExp order, LimitMode mode) {
  const FracExp a = p.a_exp(), a1 = a + FracExp(1);
  const FracExp w = order + FracExp(2);
  LimitResult out{Series(order), Series(order), Series(order)};
  // alpha side: weights grow quadratically; stop after two consecutive
  // terms beyond the order
  std::vector<FracExp> alpha_val;
  Series asum(w);
  int quiet = 0;
  for (long r = 0; quiet < 2; ++r) {
    if (r > 8 * order.ceil_scaled(1) + 64) throw ConvergenceError("alpha series does not thin out below " + order.str());
    const FracExp e = mode == LimitMode::Summed ? a * FracExp(r) + FracExp(r * r) : FracExp(0);
    const Series t = p.alpha(r, w - e + FracExp(1)).shifted(e).truncated(w);
    const FracExp v = t.valuation_or_order();
    alpha_val.push_back(v);
    quiet = (v < order) ? 0 : quiet + 1;
    asum += t;
  }
  out.alpha_sum = asum.truncated(order);
  Series den = pochhammer_infinite(a1, 1, FracExp(1), w);
  if (mode == LimitMode::BetaLimit) den *= pochhammer_infinite(FracExp(1), 1, FracExp(1), w);
  out.rhs = (asum * invert(den)).truncated(order);

  if (mode == LimitMode::BetaLimit) {
    // beta_n is the limit below `order` once every alpha_r with r <= n sits
    // far enough from its tail correction and no later alpha_r reaches below
    const long R = static_cast<long>(alpha_val.size());
    auto certified = [&](long n) {
      for (long r = 0; r < R; ++r) {
        const FracExp bound = r <= n ? alpha_val[r] + FracExp(n - r + 1) : alpha_val[r];
        if (bound < order) return false;
      }
      return true;
    };
    for (long n = 0;; ++n) {
      if (n > 4 * order.ceil_scaled(1) + 4 * R + 50) throw ConvergenceError("beta_n does not stabilize below " + order.str());
      if (!certified(n)) continue;
      const Series b = p.beta(n, order), b1 = p.beta(n + 1, order);
      if (!series_equal(b, b1)) throw ConvergenceError("certified beta index " + std::to_string(n) + " still moves");
      out.lhs = b;
      out.n_star = n;
      break;
    }
  } else {
    Series acc(order);
    long n = 0;
    for (;; ++n) {
      const FracExp e = a * FracExp(n) + FracExp(n * n);
      if (!(e - FracExp(2) < order)) break;
      const Series b = p.beta(n, order - e + FracExp(2));
      if (b.valuation_or_order() < FracExp(-2))
        throw ConvergenceError("beta_" + std::to_string(n) + " dips below q^-2; the summed tail is not controlled");
      acc += b.shifted(e).truncated(order);
    }
    out.lhs = acc;
    out.terms = n;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derivation replays

struct ReplayStage {
  std::string name;
  Comparison result;
};

struct ReplayReport {
  bool ok = true;
  std::vector<ReplayStage> stages;
  std::optional<std::size_t> failed_stage;
  std::string pipeline;
};

struct Pipeline {
  std::string seed;
  std::vector<std::pair<char, int>> steps;  // ('S', count) for S1, ('H', 1) for the a -> a/q shift
  LimitMode mode = LimitMode::BetaLimit;
  long dilate = 1;          // q -> q^dilate before comparing with the multi-sum
  FracExp jtp_z, jtp_mod;   // bilateral alpha-sum as a triple product
  bool half_factor = false; // the alpha-sum carries 1/(1 - q^{1/2})
  bool over_one_plus_half = false;  // the multi-sum is the limit divided by 1 + q^{1/2}
};

inline bool replay_supported(const std::string& tag) {
  static const std::vector<std::string> ok = {"2.1a", "2.1b", "2.1c", "2.1d", "2.2a", "2.2b",
                                              "2.3a", "2.3b", "2.4a", "2.4b"};
  return std::find(ok.begin(), ok.end(), tag) != ok.end();
}

inline Pipeline pipeline_for(const std::string& tag, int r, int j) {
  validate_descending({parse_tag(tag), r, j});
  Pipeline p;
  auto iterate = [&](int k) {
    if (k > 0) p.steps.emplace_back('S', k);
  };
  auto via_shift = [&](const char* star_seed, const char* top_seed) {
    if (j == r) {
      p.seed = top_seed;
      iterate(r - 1);
    } else {
      p.seed = star_seed;
      iterate(r - 1 - j);
      p.steps.emplace_back('H', 1);
      iterate(j);
    }
  };
  if (tag == "2.1a") {
    p.seed = "C1";
    iterate(r - 1);
    p.jtp_z = FracExp(1);
    p.jtp_mod = FracExp(8 * r - 2);
  } else if (tag == "2.1b") {
    via_shift("C4*", "C3");
    p.jtp_z = FracExp(4 * r - 2 * j - 1);
    p.jtp_mod = FracExp(8 * r - 2);
  } else if (tag == "2.1c") {
    p.seed = "C5";
    iterate(r - 1);
    p.jtp_z = FracExp(1);
    p.jtp_mod = FracExp(8 * r - 6);
  } else if (tag == "2.1d") {
    via_shift("C7*", "C6");
    p.jtp_z = FracExp(4 * r - 2 * j - 3);
    p.jtp_mod = FracExp(8 * r - 6);
  } else if (tag == "2.2a") {
    p.seed = "G5";
    iterate(r - 1);
    p.dilate = 2;
    p.jtp_z = FracExp(4 * r - 5, 4);
    p.jtp_mod = FracExp(4 * r - 3, 2);
    p.half_factor = true;
  } else if (tag == "2.2b") {
    via_shift("G4**", "G4*");
    p.dilate = 2;
    p.jtp_z = FracExp(4 * r - 4 * j - 3, 4);
    p.jtp_mod = FracExp(4 * r - 3, 2);
  } else if (tag == "2.3a") {
    p.seed = "W1";
    iterate(r - 2);
    p.mode = LimitMode::Summed;
    p.jtp_z = FracExp(3);
    p.jtp_mod = FracExp(8 * r - 2);
  } else if (tag == "2.3b") {
    p.seed = "W2";
    iterate(r - 2);
    p.mode = LimitMode::Summed;
    p.jtp_z = FracExp(4 * r - 7, 4);
    p.jtp_mod = FracExp(4 * r - 1, 2);
    p.half_factor = true;
    p.over_one_plus_half = true;
  } else if (tag == "2.4a") {
    p.seed = "G2";
    iterate(r - 1);
    p.dilate = 2;
    p.jtp_z = FracExp(4 * r - 3, 4);
    p.jtp_mod = FracExp(4 * r - 1, 2);
    p.half_factor = true;
  } else if (tag == "2.4b") {
    via_shift("G1*", "G1");
    p.dilate = 2;
    p.jtp_z = FracExp(4 * r - 4 * j - 1, 4);
    p.jtp_mod = FracExp(4 * r - 1, 2);
  } else {
    throw std::invalid_argument("no derivation recorded for '" + tag + "'");
  }
  return p;
}

inline std::string describe(const Pipeline& p) {
  std::string s = p.seed;
  for (const auto& [kind, count] : p.steps) s += kind == 'S' ? " -> S1^" + std::to_string(count) : " -> shift";
  s += p.mode == LimitMode::BetaLimit ? " -> beta limit" : " -> summed limit";
  if (p.dilate != 1) s += " -> q^" + std::to_string(p.dilate);
  return s;
}

inline BaileyPair apply_steps(BaileyPair pair, const Pipeline& p) {
  for (const auto& [kind, count] : p.steps)
    for (int i = 0; i < count; ++i) pair = kind == 'S' ? transform_S1(pair) : transform_shift(pair);
  return pair;
}

inline ReplayReport replay_pipeline(const Pipeline& p, const std::string& tag, int r, int j, FracExp order,
                                    long verify_n = 4) {
  ReplayReport rep;
  rep.pipeline = describe(p);
  auto stage = [&](const std::string& name, const Comparison& c) {
    rep.stages.push_back({name, c});
    if (!c && rep.ok) {
      rep.ok = false;
      rep.failed_stage = rep.stages.size() - 1;
    }
  };
  const FracExp inner = order * FracExp(1, p.dilate);
  const FracExp check = min(inner, FracExp(12));

  const BaileyPair seed = catalogue(p.seed);
  const PairReport s0 = verify_pair(seed, verify_n, check);
  stage("seed " + p.seed + " is a Bailey pair",
        s0.ok ? series_equal(Series(check), Series(check)) : Comparison{false, check, s0.mismatch});
  const BaileyPair fin = apply_steps(seed, p);
  const PairReport s1 = verify_pair(fin, verify_n, check);
  stage("transformed pair is a Bailey pair",
        s1.ok ? series_equal(Series(check), Series(check)) : Comparison{false, check, s1.mismatch});

  const LimitResult lim = bailey_limit(fin, inner, p.mode);
  Series bilateral = lim.alpha_sum;
  if (p.half_factor) bilateral = (bilateral - bilateral.shifted(FracExp(1, 2))).truncated(inner);
  stage("alpha-sum equals the triple product", series_equal(bilateral, jacobi_triple_product(p.jtp_z, 1, p.jtp_mod, inner)));
  stage("limit: beta side equals alpha side", series_equal(lim.lhs, lim.rhs));

  // lim beta_n still carries the 1/(q;q)_inf of the outermost S1 step
  Series norm = detail::unit(inner);
  if (p.mode == LimitMode::BetaLimit) norm = pochhammer_infinite(FracExp(1), 1, FracExp(1), inner);
  if (p.over_one_plus_half) norm *= invert(detail::unit(inner) + detail::mono(FracExp(1, 2), 1, inner));
  const FracExp m(p.dilate);
  const Series lhs = (lim.lhs * norm).dilated(m);
  const Series rhs = (lim.rhs * norm).dilated(m);
  stage("beta side equals the multi-sum", series_equal(lhs, eval_descending({parse_tag(tag), r, j}, order)));
  stage("alpha side equals the product", series_equal(rhs, rhs_builder(tag, r, j, order)));
  return rep;
}

inline ReplayReport replay_derivation(const std::string& tag, int r, int j, FracExp order, long verify_n = 4) {
  return replay_pipeline(pipeline_for(tag, r, j), tag, r, j, order, verify_n);
}

}  // namespace nahmforge
