#pragma once

// Independent reference computations for the tests. Nothing here touches
// the library's series arithmetic: expansions are done on plain integer
// vectors indexed by exponent * D, small enough for 64-bit counts.

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <nahmforge/series.hpp>

namespace oracle {

using Poly = std::vector<std::int64_t>;  // coefficient of q^{i/D} at index i

inline Poly one(int K) {
  Poly p(K, 0);
  if (K > 0) p[0] = 1;
  return p;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// p * (1 + c q^{x})
inline Poly times_binomial(const Poly& p, int x, std::int64_t c) {
  Poly out = p;
  for (std::size_t i = x; i < p.size(); ++i) out[i] += c * p[i - x];
  return out;
}

// 1/(1 - c q^x) as a geometric series, x > 0
inline Poly geometric(int K, int x, std::int64_t c) {
  Poly p(K, 0);
  std::int64_t v = 1;
  for (int i = 0; i < K; i += x) {
    p[i] = v;
    v *= c;
  }
  return p;
}

// Number of partitions of n whose parts all pass `allowed`, each part used
// at most `mult` times (mult < 0 for unbounded).
inline std::int64_t count_partitions(int n, const std::function<bool(int)>& allowed, int mult, int maxpart = -1) {
  if (maxpart < 0) maxpart = n;
  if (n == 0) return 1;
  std::int64_t total = 0;
  for (int p = std::min(n, maxpart); p >= 1; --p) {
    if (!allowed(p)) continue;
    for (int k = 1; (mult < 0 || k <= mult) && k * p <= n; ++k) total += count_partitions(n - k * p, allowed, mult, p - 1);
  }
  return total;
}

// Compares a library series with a plain vector over denominator D.
inline bool matches(const nahmforge::Series& s, const Poly& p, int D) {
  const nahmforge::Series c = s.rebased(std::lcm(s.denom(), static_cast<std::int64_t>(D)));
  const std::int64_t f = c.denom() / D;
  for (std::size_t i = 0; i < p.size(); ++i) {
    nahmforge::FracExp e(static_cast<std::int64_t>(i), D);
    if (!(e < s.order())) break;
    if (s.coeff(e) != p[i]) return false;
  }
  for (const auto& [k, v] : c.terms())
    if (k % f != 0 || k / f >= static_cast<std::int64_t>(p.size()) || k < 0) return false;
  return true;
}

// Second Bernoulli function, straight from {x}^2 - {x} + 1/6.
inline nahmforge::Rational bernoulli2(const nahmforge::Rational& x) {
  nahmforge::Rational f = x - nahmforge::Rational(nahmforge::floor_of(x));
  return f * f - f + nahmforge::Rational(1, 6);
}

}  // namespace oracle
