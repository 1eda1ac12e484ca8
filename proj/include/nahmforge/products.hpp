#pragma once

// Product-side objects: Jacobi triple products, theta series, generalized
// Dedekind eta functions and their quotients, and the right-hand sides of
// the identities the verifier checks.

#include <string>
#include <utility>
#include <vector>

#include "descending.hpp"
#include "series.hpp"

namespace nahmforge {

// magnitude of the negative part of e
inline FracExp abs_neg(FracExp e) { return e < FracExp(0) ? FracExp(0) - e : FracExp(0); }

// prod_{k>=0} (1 - s q^{e + k t}) for any rational e. Factors with e <= 0 are
// finitely many Laurent binomials; the rest is an ordinary power series.
inline Series poch(FracExp e, int s, FracExp t, FracExp order) {
  if (!(FracExp(0) < t)) throw DivergentProductError("infinite Pochhammer with step " + t.str() + " <= 0");
  std::vector<FracExp> low;
  FracExp shift(0);
  while (!(FracExp(0) < e)) {
    low.push_back(e);
    shift = shift - e;
    e = e + t;
  }
  Series acc = pochhammer_infinite(e, s, t, order + shift);
  for (const FracExp& x : low) {
    if (x == FracExp(0)) {
      acc = acc.scaled(Rational(1 - s));
    } else {
      acc = detail::binomial_product(acc, x, s);
    }
  }
  return acc.truncated(order);
}

// (s q^e; -q^m)_inf
inline Series alt_poch(FracExp e, int s, FracExp m, FracExp order) { return alt_pochhammer_infinite(e, s, m, order); }

// ---------------------------------------------------------------------------
// Jacobi triple product with z = sign * q^{z_exp}, nome q^{modulus/2}:
//   sum_n (-1)^n q^{n^2 modulus/2} z^n = (q^modulus, z q^{modulus/2}, q^{modulus/2}/z; q^modulus)_inf

inline Series jacobi_triple_sum(FracExp z_exp, int z_sign, FracExp modulus, FracExp order) {
  if (!(FracExp(0) < modulus)) throw DivergentProductError("triple product modulus must be positive");
  if (z_sign != 1 && z_sign != -1) throw std::domain_error("z sign must be +1 or -1");
  const Rational a = modulus.to_rational() / 2, b = z_exp.to_rational(), theta = order.to_rational();
  const std::int64_t D = lcm64(z_exp.den(), 2 * modulus.den());
  std::vector<std::pair<std::int64_t, Rational>> items;
  // exponent a n^2 + b n is convex in n; walk outwards from the vertex
  const long v = floor_of(-b / (2 * a)).get_si();
  for (int dir : {1, -1}) {
    for (long n = dir > 0 ? v : v - 1;; n += dir) {
      const Rational e = a * n * n + b * n;
      if (e >= theta) break;
      const int sign = ((n % 2 != 0) ? -1 : 1) * ((z_sign < 0 && n % 2 != 0) ? -1 : 1);
      items.emplace_back(to_long(e * D), Rational(sign));
    }
  }
  return Series::from_terms(D, order, items);
}

inline Series jacobi_triple_product(FracExp z_exp, int z_sign, FracExp modulus, FracExp order) {
  if (!(FracExp(0) < modulus)) throw DivergentProductError("triple product modulus must be positive");
  if (z_sign != 1 && z_sign != -1) throw std::domain_error("z sign must be +1 or -1");
  const FracExp half = modulus * FracExp(1, 2);
  // exact zero from a (1 - 1) factor short-circuits the rest
  if ((z_sign == 1) && (z_exp + half == FracExp(0) || half - z_exp == FracExp(0))) return Series(order);
  // Laurent factors lower the product's order, so expand the rest further
  const FracExp slack = abs_neg(z_exp + half) + abs_neg(half - z_exp) + modulus;
  const FracExp work = order + slack;
  Series p = pochhammer_infinite(modulus, 1, modulus, work) * poch(z_exp + half, z_sign, modulus, work) *
             poch(half - z_exp, z_sign, modulus, work);
  return p.truncated(order);
}

// ---------------------------------------------------------------------------
// Theta series
//   h_{j,m} = sum_k q^{m (k + j/2m)^2},  g_{j,m} = sum_k (-1)^k q^{m (k + j/2m)^2}

struct ThetaSpec {
  Rational j;
  Rational m;
};

namespace detail {

// j reduced into [0, m] using evenness and 2m-periodicity, with the sign g
// picks up on the way (h ignores it).
inline std::pair<Rational, int> reduce_theta_index(Rational j, const Rational& m) {
  int sign = 1;
  if (j < 0) j = -j;
  const Integer t = floor_of(j / (2 * m));
  j -= Rational(t) * 2 * m;
  if (t % 2 != 0) sign = -sign;
  if (j > m) {
    j = 2 * m - j;
    sign = -sign;
  }
  return {j, sign};
}

inline void require_theta(const ThetaSpec& s) {
  if (s.m <= 0) throw std::domain_error("theta modulus m must be positive");
}

inline Series theta_lattice(const ThetaSpec& s, bool alternating, FracExp order) {
  require_theta(s);
  const Rational four_m = 4 * s.m, theta = order.to_rational();
  std::vector<std::pair<Rational, int>> raw;
  const long v = floor_of(-s.j / (2 * s.m)).get_si();
  for (int dir : {1, -1}) {
    for (long k = dir > 0 ? v : v - 1;; k += dir) {
      const Rational x = 2 * s.m * k + s.j;
      const Rational e = x * x / four_m;
      if (e >= theta) break;
      raw.emplace_back(e, (alternating && k % 2 != 0) ? -1 : 1);
    }
  }
  std::int64_t D = 1;
  for (const auto& [e, sign] : raw) D = lcm64(D, FracExp(e).den());
  std::vector<std::pair<std::int64_t, Rational>> items;
  for (const auto& [e, sign] : raw) items.emplace_back(to_long(e * D), Rational(sign));
  return Series::from_terms(D, order, items);
}

}  // namespace detail

// Product forms:
//   h_{j,m} = q^{j^2/4m} (-q^{m-j}, -q^{m+j}, q^{2m}; q^{2m})_inf
//   g_{j,m} = q^{j^2/4m} ( q^{m-j},  q^{m+j}, q^{2m}; q^{2m})_inf
inline Series theta_h(const ThetaSpec& s, FracExp order) {
  detail::require_theta(s);
  const auto [j, sign] = detail::reduce_theta_index(s.j, s.m);
  (void)sign;  // h is even and 2m-periodic with no sign change
  const FracExp pre(j * j / (4 * s.m)), m(s.m), jj(j), two_m(2 * s.m);
  const FracExp work = order - pre;
  if (!(FracExp(0) < work)) return Series(order, pre.den());
  Series p = poch(m - jj, -1, two_m, work) * poch(m + jj, -1, two_m, work) * pochhammer_infinite(two_m, 1, two_m, work);
  return p.shifted(pre).truncated(order);
}

inline Series theta_g(const ThetaSpec& s, FracExp order) {
  detail::require_theta(s);
  const auto [j, sign] = detail::reduce_theta_index(s.j, s.m);
  const FracExp pre(j * j / (4 * s.m)), m(s.m), jj(j), two_m(2 * s.m);
  if (j == s.m) return Series(order, pre.den());
  const FracExp work = order - pre;
  if (!(FracExp(0) < work)) return Series(order, pre.den());
  Series p = poch(m - jj, 1, two_m, work) * poch(m + jj, 1, two_m, work) * pochhammer_infinite(two_m, 1, two_m, work);
  p = p.shifted(pre).truncated(order);
  return sign < 0 ? -p : p;
}

inline Series theta_h_sum(const ThetaSpec& s, FracExp order) { return detail::theta_lattice(s, false, order); }
inline Series theta_g_sum(const ThetaSpec& s, FracExp order) { return detail::theta_lattice(s, true, order); }

// ---------------------------------------------------------------------------
// Generalized Dedekind eta
//   eta_{delta,g} = q^{(delta/2) P2(g/delta)} prod_{n = g mod delta} (1 - q^n) prod_{n = -g mod delta} (1 - q^n)
// with P2(x) = {x}^2 - {x} + 1/6.
//
// Both congruence products are always applied. At g = 0 this gives
// q^{delta/12} (q^delta; q^delta)^2, i.e. eta(delta tau)^2; at g = delta/2 it
// gives q^{-delta/24} (q^{delta/2}; q^delta)^2. The alternative reading that
// keeps one copy is available for comparison.

enum class EtaConvention { BothProducts, SingleCopy };

struct GenEtaSpec {
  Rational delta;
  Rational g;
};

inline Rational bernoulli_p2(const Rational& x) {
  const Rational f = x - Rational(floor_of(x));
  return f * f - f + Rational(1, 6);
}

inline Rational gen_eta_prefactor(const GenEtaSpec& s) { return s.delta / 2 * bernoulli_p2(s.g / s.delta); }

namespace detail {

inline void require_eta(const GenEtaSpec& s) {
  if (s.delta <= 0) throw std::domain_error("generalized eta needs delta > 0");
  if (s.g < 0 || s.g >= s.delta) throw std::domain_error("generalized eta needs 0 <= g < delta");
}

// The product part alone (constant term 1).
inline Series gen_eta_product(const GenEtaSpec& s, FracExp order, EtaConvention conv) {
  require_eta(s);
  const FracExp d(s.delta), g(s.g);
  const bool degenerate = s.g == 0 || 2 * s.g == s.delta;
  if (s.g == 0) {
    Series p = pochhammer_infinite(d, 1, d, order);
    return conv == EtaConvention::BothProducts ? p * p : p;
  }
  Series a = pochhammer_infinite(g, 1, d, order);
  if (degenerate && conv == EtaConvention::SingleCopy) return a;
  return a * pochhammer_infinite(d - g, 1, d, order);
}

}  // namespace detail

inline Series gen_eta(const GenEtaSpec& s, FracExp order, EtaConvention conv = EtaConvention::BothProducts) {
  const FracExp pre(gen_eta_prefactor(s));
  const FracExp work = order - pre;
  if (!(FracExp(0) < work)) return Series(order, pre.den());
  return detail::gen_eta_product(s, work, conv).shifted(pre).truncated(order);
}

struct EtaFactor {
  GenEtaSpec eta;
  Rational exponent;
};

struct EtaQuotientSpec {
  std::vector<EtaFactor> factors;
};

inline Rational eta_quotient_prefactor(const EtaQuotientSpec& q) {
  Rational total = 0;
  for (const auto& f : q.factors) total += f.exponent * gen_eta_prefactor(f.eta);
  return total;
}

inline Series eta_quotient(const EtaQuotientSpec& q, FracExp order, EtaConvention conv = EtaConvention::BothProducts) {
  for (const auto& f : q.factors) {
    detail::require_eta(f.eta);
    const Integer den = f.exponent.get_den();
    if (den != 1 && den != 2)
      throw std::domain_error("eta exponent " + to_string(f.exponent) + " is not half-integral");
    if (den == 2 && !(f.eta.g == 0 || 2 * f.eta.g == f.eta.delta))
      throw std::domain_error("half-integral eta exponent requires g = 0 or g = delta/2");
  }
  const FracExp pre(eta_quotient_prefactor(q));
  const FracExp work = order - pre;
  if (!(FracExp(0) < work)) return Series(order, pre.den());
  Series acc = Series::one(work);
  for (const auto& f : q.factors) {
    Series p = detail::gen_eta_product(f.eta, work, conv);
    const Integer twice = f.exponent.get_num() * (f.exponent.get_den() == 2 ? 1 : 2);
    // p^{twice/2}
    if (twice % 2 != 0) p = sqrt_unit(p);
    const long k = twice.get_si() / (twice % 2 != 0 ? 1 : 2);
    acc *= pow(p, k);
  }
  return acc.shifted(pre).truncated(order);
}

// ---------------------------------------------------------------------------
// Right-hand sides

namespace detail {

inline void require_rank(const std::string& eq, int r, int rmin) {
  if (r < rmin)
    throw std::domain_error(eq + " needs r >= " + std::to_string(rmin) + " (got r=" + std::to_string(r) + ")");
}

inline void require_j(const std::string& eq, int r, int j) {
  if (j < 1 || j > r)
    throw std::domain_error(eq + " needs 1 <= j <= r (got r=" + std::to_string(r) + ", j=" + std::to_string(j) + ")");
}

// (q^a, q^b, q^c; q^m)_inf with all exponents given as rationals
inline Series triple(FracExp a, FracExp b, FracExp c, FracExp m, FracExp order) {
  return poch(a, 1, m, order) * poch(b, 1, m, order) * poch(c, 1, m, order);
}

}  // namespace detail

inline const std::vector<std::string>& rhs_equations() {
  static const std::vector<std::string> eqs = {"1.7",  "1.8",  "1.9",  "1.10", "1.11", "1.12",           "1.13",
                                               "1.14", "SumC", "2.1a", "2.1b", "2.1c", "2.1d",           "2.2a",
                                               "2.2b", "2.3a", "2.3b", "2.4a", "2.4b", "W1.1",           "W1.1-corrected",
                                               "W1.2", "Capparelli"};
  return eqs;
}

inline bool rhs_takes_j(const std::string& eq) {
  return eq == "1.8" || eq == "1.10" || eq == "1.12" || eq == "1.14" || eq == "W1.2" || eq == "2.1b" || eq == "2.1d" ||
         eq == "2.2b" || eq == "2.4b";
}

namespace detail {

inline Series rhs_expand(const std::string& eq, int r, int j, FracExp o) {
  const auto F = [](long n, long d = 1) { return FracExp(n, d); };
  // (q,q^3,q^4;q^4)_inf and (q^2,q^2,q^4;q^4)_inf
  const auto den_a = [&] { return triple(F(1), F(3), F(4), F(4), o); };
  const auto den_b = [&] {
    Series t = pochhammer_infinite(F(2), 1, F(4), o);
    return t * t * pochhammer_infinite(F(4), 1, F(4), o);
  };
  const auto den_half = [&] {
    // (q^{1/2}, q^{3/2}, q^2; q^2)_inf
    return pochhammer_infinite(F(1, 2), 1, F(2), o) * pochhammer_infinite(F(3, 2), 1, F(2), o) *
           pochhammer_infinite(F(2), 1, F(2), o);
  };
  const auto alt3 = [&](FracExp a, int sa, FracExp b, int sb, FracExp c, int sc, FracExp m) {
    return alt_poch(a, sa, m, o) * alt_poch(b, sb, m, o) * alt_poch(c, sc, m, o);
  };
  const auto shifted = [&](const Series& s, FracExp e) {
    if (!(e < o)) return Series(o, e.den());
    return (s.truncated(o - e)).shifted(e);
  };

  if (rhs_takes_j(eq)) require_j(eq, r, j);
  if (eq == "1.7") {
    detail::require_rank(eq, r, 2);
    Series t1 = triple(F(8 * r - 4), F(8 * r), F(16 * r - 4), F(16 * r - 4), o) * invert(den_a());
    Series t2 = alt3(F(1), -1, F(4 * r - 2), 1, F(4 * r - 1), -1, F(4 * r - 1)) * invert(den_b());
    return t1 + shifted(t2, F(r - 1, 2));
  }
  if (eq == "1.8") {
    detail::require_rank(eq, r, 2);
    Series t1 = alt3(F(2 * j), 1, F(4 * r - 2 * j - 1), -1, F(4 * r - 1), -1, F(4 * r - 1)) * invert(den_b());
    Series t2 = triple(F(4 * j), F(16 * r - 4 * j - 4), F(16 * r - 4), F(16 * r - 4), o) * invert(den_a());
    return t1 + shifted(t2, F(3 * r - 2 * j - 1, 2));
  }
  if (eq == "1.9") {
    detail::require_rank(eq, r, 2);
    Series t1 = triple(F(8 * r - 8), F(8 * r - 4), F(16 * r - 12), F(16 * r - 12), o) * invert(den_a());
    Series t2 = alt3(F(1), -1, F(4 * r - 4), 1, F(4 * r - 3), -1, F(4 * r - 3)) * invert(den_b());
    return t1 + shifted(t2, F(2 * r - 3, 4));
  }
  if (eq == "1.10") {
    detail::require_rank(eq, r, 2);
    Series t1 = alt3(F(2 * j), 1, F(4 * r - 3 - 2 * j), -1, F(4 * r - 3), -1, F(4 * r - 3)) * invert(den_b());
    Series t2 = triple(F(4 * j), F(16 * r - 4 * j - 12), F(16 * r - 12), F(16 * r - 12), o) * invert(den_a());
    return t1 + shifted(t2, F(6 * r - 4 * j - 5, 4));
  }
  if (eq == "1.11") {
    detail::require_rank(eq, r, 2);
    return triple(F(1, 2), F(2 * r - 1), F(4 * r - 1, 2), F(4 * r - 1, 2), o) * invert(den_half());
  }
  if (eq == "1.12") {
    detail::require_rank(eq, r, 2);
    return triple(F(j), F(4 * r - 2 * j - 1, 2), F(4 * r - 1, 2), F(4 * r - 1, 2), o) * invert(den_half());
  }
  if (eq == "1.13") {
    detail::require_rank(eq, r, 2);
    return triple(F(1, 2), F(2 * r - 2), F(4 * r - 3, 2), F(4 * r - 3, 2), o) * invert(den_half());
  }
  if (eq == "1.14") {
    detail::require_rank(eq, r, 2);
    return triple(F(j), F(4 * r - 2 * j - 3, 2), F(4 * r - 3, 2), F(4 * r - 3, 2), o) * invert(den_half());
  }
  if (eq == "SumC") {
    detail::require_rank(eq, r, 3);
    Series t1 = triple(F(8 * r + 4), F(8 * r - 8), F(16 * r - 4), F(16 * r - 4), o) * invert(den_a());
    Series t2 = alt3(F(3), -1, F(4 * r - 4), 1, F(4 * r - 1), -1, F(4 * r - 1)) * invert(den_b());
    return t1 + shifted(t2, F(r - 3, 2));
  }
  if (eq == "W1.1" || eq == "W1.1-corrected" || eq == "W1.2") {
    detail::require_rank(eq, r, 2);
    const FracExp m = F(4 * r - 1, 2);
    Series t = eq == "W1.1"             ? triple(F(1, 2), m, m, m, o)
               : eq == "W1.1-corrected" ? triple(F(1, 2), F(2 * r - 1), m, m, o)
                                        : triple(F(j), F(4 * r - 2 * j - 1, 2), m, m, o);
    return poch(F(1, 2), -1, F(1), o) * t * invert(pochhammer_infinite(F(1), 1, F(1), o));
  }
  if (eq == "Capparelli") {
    return poch(F(2), -1, F(6), o) * poch(F(3), -1, F(6), o) * poch(F(4), -1, F(6), o) * poch(F(6), -1, F(6), o);
  }
  // descending multi-sums
  const DescTag tag = parse_tag(eq);
  validate_descending(DescendingSumSpec{tag, r, j});
  const auto qq = [&] { return pochhammer_infinite(F(1), 1, F(1), o); };
  const auto q2q = [&] { return poch(F(2), 1, F(1), o); };
  const auto q2q2 = [&] { return poch(F(2), 1, F(2), o); };
  const auto lead = [&] {
    // (1 - q)(q^4;q^2)_inf
    return (Series::one(o) - Series::monomial(F(1), 1, o)) * poch(F(4), 1, F(2), o);
  };
  switch (tag) {
    case DescTag::D2_1a:
      return triple(F(4 * r - 2), F(4 * r), F(8 * r - 2), F(8 * r - 2), o) * invert(qq());
    case DescTag::D2_1b:
      return triple(F(2 * j), F(8 * r - 2 * j - 2), F(8 * r - 2), F(8 * r - 2), o) * invert(q2q());
    case DescTag::D2_1c:
      return triple(F(4 * r - 4), F(4 * r - 2), F(8 * r - 6), F(8 * r - 6), o) * invert(qq());
    case DescTag::D2_1d:
      return triple(F(2 * j), F(8 * r - 2 * j - 6), F(8 * r - 6), F(8 * r - 6), o) * invert(q2q());
    case DescTag::D2_2a:
      return triple(F(1), F(4 * r - 4), F(4 * r - 3), F(4 * r - 3), o) * invert(lead());
    case DescTag::D2_2b:
      return triple(F(2 * j), F(4 * r - 2 * j - 3), F(4 * r - 3), F(4 * r - 3), o) * invert(q2q2());
    case DescTag::D2_3a:
      return triple(F(4 * r + 2), F(4 * r - 4), F(8 * r - 2), F(8 * r - 2), o) * invert(qq());
    case DescTag::D2_3b:
      return triple(F(3, 2), F(2 * r - 2), F(4 * r - 1, 2), F(4 * r - 1, 2), o) * invert(qq());
    case DescTag::D2_4a:
      return triple(F(1), F(4 * r - 2), F(4 * r - 1), F(4 * r - 1), o) * invert(lead());
    case DescTag::D2_4b:
      return triple(F(2 * j), F(4 * r - 2 * j - 1), F(4 * r - 1), F(4 * r - 1), o) * invert(q2q2());
  }
  throw std::domain_error("unknown equation '" + eq + "'");
}

}  // namespace detail

// Expanded one unit past `order` so the one negative prefactor (q^{-1/4} for
// key "1.10" at r = 2, j = 2) still leaves the full order.
inline Series rhs_builder(const std::string& eq, int r, int j, FracExp order) {
  return detail::rhs_expand(eq, r, j, order + FracExp(1)).truncated(order);
}

}  // namespace nahmforge
