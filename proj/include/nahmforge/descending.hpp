#pragma once

// Constrained multi-sums over N_1 >= N_2 >= ... >= N_{r-1} >= 0.
//
// Every family has an exponent that splits as sum_i (a_i N_i^2 + b_i N_i),
// denominators (q^s;q^s)_{N_i - N_{i+1}} for i < r-1, and a family-specific
// factor in the last variable. Separability gives a cheap lower bound for
// pruning: assigned terms plus the integer minimum of each unassigned one.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "series.hpp"

namespace nahmforge {

enum class DescTag { D2_1a, D2_1b, D2_1c, D2_1d, D2_2a, D2_2b, D2_3a, D2_3b, D2_4a, D2_4b };

inline const std::vector<std::pair<DescTag, std::string>>& descending_tags() {
  static const std::vector<std::pair<DescTag, std::string>> tags = {
      {DescTag::D2_1a, "2.1a"}, {DescTag::D2_1b, "2.1b"}, {DescTag::D2_1c, "2.1c"}, {DescTag::D2_1d, "2.1d"},
      {DescTag::D2_2a, "2.2a"}, {DescTag::D2_2b, "2.2b"}, {DescTag::D2_3a, "2.3a"}, {DescTag::D2_3b, "2.3b"},
      {DescTag::D2_4a, "2.4a"}, {DescTag::D2_4b, "2.4b"}};
  return tags;
}

inline std::string tag_name(DescTag t) {
  for (const auto& [k, v] : descending_tags())
    if (k == t) return v;
  return "?";
}

inline DescTag parse_tag(const std::string& s) {
  for (const auto& [k, v] : descending_tags())
    if (v == s) return k;
  throw std::invalid_argument("unknown multi-sum tag '" + s + "'");
}

inline bool tag_takes_j(DescTag t) {
  return t == DescTag::D2_1b || t == DescTag::D2_1d || t == DescTag::D2_2b || t == DescTag::D2_4b;
}

struct DescendingSumSpec {
  DescTag tag = DescTag::D2_1a;
  int r = 2;
  int j = 0;  // used only by the j-indexed families
};

inline void validate_descending(const DescendingSumSpec& s) {
  const int rmin = (s.tag == DescTag::D2_3a || s.tag == DescTag::D2_3b) ? 3 : 2;
  if (s.r < rmin)
    throw std::domain_error("multi-sum " + tag_name(s.tag) + " needs r >= " + std::to_string(rmin) + " (got " +
                            std::to_string(s.r) + ")");
  if (tag_takes_j(s.tag) && (s.j < 1 || s.j > s.r))
    throw std::domain_error("multi-sum " + tag_name(s.tag) + " needs 1 <= j <= r (got j=" + std::to_string(s.j) + ")");
}

namespace detail {

struct DescendingShape {
  std::vector<Rational> quad, lin;  // per-variable exponent a_i N^2 + b_i N
  int step = 1;                     // (q^step;q^step) on consecutive differences
  bool alternating = false;         // (-1)^{N_{r-1}}
  Rational extra_min = 0;           // lowest exponent the last-variable factor can add
};

inline DescendingShape descending_shape(const DescendingSumSpec& s) {
  const int R = s.r - 1;
  DescendingShape sh;
  auto fill = [&](int a, int b) {
    sh.quad.assign(R, Rational(a));
    sh.lin.assign(R, Rational(b));
  };
  switch (s.tag) {
    case DescTag::D2_1a:
    case DescTag::D2_1c:
      fill(1, 0);
      break;
    case DescTag::D2_1b:
    case DescTag::D2_1d:
      fill(1, 2);
      for (int i = 1; i < s.j && i <= R; ++i) sh.lin[i - 1] = 1;
      break;
    case DescTag::D2_2a:
    case DescTag::D2_4a:
      fill(2, 2);
      sh.step = 2;
      break;
    case DescTag::D2_2b:
    case DescTag::D2_4b:
      fill(2, 2);
      sh.step = 2;
      for (int i = 1; i < s.j && i <= R; ++i) sh.lin[i - 1] = 0;
      break;
    case DescTag::D2_3a:
      fill(1, 0);
      sh.lin[R - 1] = 1;
      sh.extra_min = -1;
      break;
    case DescTag::D2_3b:
      fill(1, 1);
      sh.lin[R - 1] = 2;
      break;
  }
  if (s.tag == DescTag::D2_1c || s.tag == DescTag::D2_1d) {
    // + binom(N_{r-1}, 2)
    sh.quad[R - 1] += Rational(1, 2);
    sh.lin[R - 1] -= Rational(1, 2);
  }
  if (s.tag == DescTag::D2_2a || s.tag == DescTag::D2_2b) {
    sh.alternating = true;
    sh.quad[R - 1] += 1;
    if (s.tag == DescTag::D2_2b) sh.lin[R - 1] -= 2;
  }
  return sh;
}

// Numerator over denominator attached to the last variable N, to `order`.
inline Series last_factor(DescTag tag, long N, FracExp order) {
  const FracExp one(1), two(2);
  auto mono = [&](FracExp e) { return e < order ? Series::monomial(e, Rational(1), order) : Series(order); };
  auto inv_poch = [&](FracExp e, int s, FracExp t, long n) { return invert(pochhammer_finite(e, s, t, n, order)); };
  switch (tag) {
    case DescTag::D2_1a:
    case DescTag::D2_1c:
      return inv_poch(one, 1, one, N) * inv_poch(one, 1, two, N);
    case DescTag::D2_1b:
    case DescTag::D2_1d:
      return inv_poch(one, 1, one, N) * inv_poch(FracExp(3), 1, two, N);
    case DescTag::D2_2a:
    case DescTag::D2_4a:
      return inv_poch(FracExp(4), 1, FracExp(4), N) * inv_poch(FracExp(3), -1, two, N);
    case DescTag::D2_2b:
    case DescTag::D2_4b:
      return inv_poch(FracExp(4), 1, FracExp(4), N) * inv_poch(one, -1, two, N);
    case DescTag::D2_3a: {
      // (1 + q^{-1} - q^{N-1}) / ((q;q)_N (q;q^2)_N)
      Series num = Series::one(order) + mono(FracExp(-1)) - mono(FracExp(N - 1));
      return num * inv_poch(one, 1, one, N) * inv_poch(one, 1, two, N);
    }
    case DescTag::D2_3b: {
      // (1 + q + q^{N+1/2}) / ((-q^{1/2};q)_{N+1} (q^2;q^2)_N)
      Series num = Series::one(order) + mono(one) + mono(FracExp(2 * N + 1, 2));
      return num * inv_poch(FracExp(1, 2), -1, one, N + 1) * inv_poch(two, 1, two, N);
    }
  }
  throw std::logic_error("unhandled multi-sum tag");
}

// smallest value of a N^2 + b N over integers N >= 0 (a > 0)
inline Rational integer_min(const Rational& a, const Rational& b) {
  const Rational v = -b / (2 * a);
  Rational best = 0;
  for (long n : {static_cast<long>(floor_of(v).get_si()), static_cast<long>(floor_of(v).get_si()) + 1}) {
    if (n < 0) continue;
    const Rational val = a * n * n + b * n;
    if (val < best) best = val;
  }
  return best;
}

}  // namespace detail

inline Series eval_descending(const DescendingSumSpec& spec, FracExp order) {
  validate_descending(spec);
  const detail::DescendingShape sh = detail::descending_shape(spec);
  const int R = spec.r - 1;
  const Rational theta = order.to_rational();

  std::vector<Rational> mins(R);
  Rational floor_total = sh.extra_min;
  for (int i = 0; i < R; ++i) {
    mins[i] = detail::integer_min(sh.quad[i], sh.lin[i]);
    floor_total += mins[i];
  }
  // Factors are expanded far enough that any leaf's shifted product still
  // reaches `order`, including the negative power in the 2.3a numerator.
  const FracExp work(theta - floor_total + 2);

  std::map<long, Series> diff_cache, last_cache;
  auto diff_factor = [&](long m) -> const Series& {
    auto it = diff_cache.find(m);
    if (it == diff_cache.end())
      it = diff_cache.emplace(m, invert(pochhammer_finite(FracExp(sh.step), 1, FracExp(sh.step), m, work))).first;
    return it->second;
  };
  auto last = [&](long n) -> const Series& {
    auto it = last_cache.find(n);
    if (it == last_cache.end()) it = last_cache.emplace(n, detail::last_factor(spec.tag, n, work)).first;
    return it->second;
  };

  Series total(order);
  std::vector<long> N(R, 0);
  std::function<void(int, Rational, Rational)> rec = [&](int i, Rational partial, Rational rest_min) {
    if (i == R) {
      Series term = last(N[R - 1]);
      for (int k = 0; k + 1 < R; ++k) term *= diff_factor(N[k] - N[k + 1]);
      if (sh.alternating && N[R - 1] % 2 != 0) term = -term;
      const Series placed = term.shifted(FracExp(partial));
      if (placed.order() < order) throw std::logic_error("multi-sum term expanded to insufficient order");
      total += placed.truncated(order);
      return;
    }
    const Rational rest = rest_min - mins[i];
    const long top = i == 0 ? -1 : N[i - 1];
    const Rational vertex = -sh.lin[i] / (2 * sh.quad[i]);
    for (long n = 0; top < 0 || n <= top; ++n) {
      const Rational val = partial + sh.quad[i] * n * n + sh.lin[i] * n;
      if (val + rest + sh.extra_min >= theta) {
        if (Rational(n) >= vertex) break;
        continue;
      }
      N[i] = n;
      rec(i + 1, val, rest);
    }
    N[i] = 0;
  };
  Rational all_min = 0;
  for (const auto& m : mins) all_min += m;
  rec(0, Rational(0), all_min);
  return total;
}

}  // namespace nahmforge
