#pragma once

// Robins' criterion for generalized eta quotients and the quotients that
// express the symmetrizer-(2,...,2,1) Nahm sums.
//
// For f = prod eta_{delta,g}^{r_{delta,g}} and a level N:
//   w(f)      = sum r_{delta,0}
//   Ord_inf f = sum delta P2(g/delta) r_{delta,g}
//   Ord_0 f   = sum (N/delta) P2(0) r_{delta,g}
// With t, N0 least such that t Ord_inf and N0 Ord_0 are even integers,
// f(t tau) is a modular function on Gamma_1(t N0 N) whenever w(f) = 0.
//
// delta and g may be non-integral (delta = 2r - 1/2, g = 1/2 occur below).
// The formulas are applied verbatim in that case; divisibility delta | N is
// only demanded when every delta is an integer.

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nahm.hpp"
#include "products.hpp"

namespace nahmforge {

inline Rational p2(const Rational& x) { return bernoulli_p2(x); }

struct RobinsReport {
  Rational w, ord_inf, ord_zero;
  Integer t = 1, N0 = 1, N = 1, level = 1;
  bool modular = true;  // w == 0

  nlohmann::json to_json() const {
    auto q = [](const Rational& x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); };
    auto z = [](const Integer& x) { return x.get_si(); };
    return {{"w", q(w)}, {"ord_inf", q(ord_inf)}, {"ord_zero", q(ord_zero)}, {"t", z(t)},
            {"N0", z(N0)},  {"N", z(N)},             {"level", z(level)},        {"modular", modular}};
  }
};

namespace detail {

// least positive s with s * x an even integer
inline Integer least_even_multiplier(const Rational& x) {
  if (x == 0) return 1;
  const Integer den = x.get_den();
  return (x.get_num() % 2 == 0) ? den : Integer(2 * den);
}

}  // namespace detail

inline RobinsReport robins_analyze(const EtaQuotientSpec& q, const Integer& N) {
  if (N <= 0) throw std::domain_error("level N must be positive");
  bool integral = true;
  for (const auto& f : q.factors) {
    if (f.eta.delta <= 0) throw std::domain_error("eta factor with delta <= 0");
    integral = integral && is_integer(f.eta.delta);
  }
  if (integral)
    for (const auto& f : q.factors)
      if (N % f.eta.delta.get_num() != 0)
        throw std::domain_error("delta = " + to_string(f.eta.delta) + " does not divide N = " + N.get_str());

  RobinsReport rep;
  rep.N = N;
  const Rational p2_zero = p2(0);
  for (const auto& f : q.factors) {
    if (f.eta.g == 0) rep.w += f.exponent;
    rep.ord_inf += f.eta.delta * p2(f.eta.g / f.eta.delta) * f.exponent;
    rep.ord_zero += Rational(N) / f.eta.delta * p2_zero * f.exponent;
  }
  rep.modular = rep.w == 0;
  rep.t = detail::least_even_multiplier(rep.ord_inf);
  rep.N0 = detail::least_even_multiplier(rep.ord_zero);
  rep.level = rep.t * rep.N0 * rep.N;
  return rep;
}

// ---------------------------------------------------------------------------
// Quotients for the four families

enum class ProofQuotient { F1, F2, G1, G2, Single, SingleShifted };

struct ProofQuotientInfo {
  const char* label;
  ProofQuotient kind;
  Family family;
};

inline const std::vector<ProofQuotientInfo>& proof_quotients() {
  static const std::vector<ProofQuotientInfo> all = {
      {"4.1-f1", ProofQuotient::F1, Family::T1_1_1},     {"4.1-f2", ProofQuotient::F2, Family::T1_1_1},
      {"4.2-g1", ProofQuotient::G1, Family::T1_1_2},     {"4.2-g2", ProofQuotient::G2, Family::T1_1_2},
      {"4.3", ProofQuotient::Single, Family::T1_2},      {"4.4", ProofQuotient::SingleShifted, Family::T1_3},
  };
  return all;
}

inline const ProofQuotientInfo& proof_quotient_info(const std::string& label) {
  for (const auto& i : proof_quotients())
    if (label == i.label) return i;
  throw std::invalid_argument("unknown quotient '" + label + "'");
}

// Selectors and the quotients summed for each. Selectors "4.1" and "4.2"
// carry level 128(4r-1)^2, "4.3" and "4.4" carry 64(4r-3)^2. Quotient keys
// keep their own names, so selector "4.2" uses quotient "4.3" and selector
// "4.3" uses "4.2-g1"/"4.2-g2".
inline std::vector<std::string> theorem_quotients(const std::string& theorem) {
  if (theorem == "4.1") return {"4.1-f1", "4.1-f2"};
  if (theorem == "4.2") return {"4.3"};
  if (theorem == "4.3") return {"4.2-g1", "4.2-g2"};
  if (theorem == "4.4") return {"4.4"};
  throw std::invalid_argument("unknown theorem '" + theorem + "'");
}

inline Family theorem_family(const std::string& theorem) {
  return proof_quotient_info(theorem_quotients(theorem).front()).family;
}

// the index k attached to the linear term b_j
inline int quotient_k(Family f, int r, int j) {
  if (r < 2) throw std::domain_error("rank must be at least 2");
  if (j < 0 || j > r) throw std::domain_error("j must lie in [0, r]");
  if (j > 0) return j;
  switch (f) {
    case Family::T1_1_1:
    case Family::T1_2:
      return 2 * r - 1;
    case Family::T1_1_2:
    case Family::T1_3:
      return 2 * r - 2;
  }
  return 0;
}

inline EtaQuotientSpec build_proof_quotients(const std::string& label, int r, int j) {
  const ProofQuotientInfo& info = proof_quotient_info(label);
  const int k = quotient_k(info.family, r, j);
  auto e = [](Rational delta, Rational g, Rational x) { return EtaFactor{GenEtaSpec{delta, g}, x}; };
  const Rational h(1, 2);
  switch (info.kind) {
    case ProofQuotient::F1:
    case ProofQuotient::G1: {
      const int big = info.kind == ProofQuotient::F1 ? 16 * r - 4 : 16 * r - 12;
      return {{e(big, 4 * k, 1), e(big, 0, h), e(4, 1, -1), e(4, 0, -h)}};
    }
    case ProofQuotient::F2:
    case ProofQuotient::G2: {
      const int s = info.kind == ProofQuotient::F2 ? 0 : 1;  // 8r-2 vs 8r-6 and friends
      const int mid = 8 * r - 2 - 4 * s, big = 16 * r - 4 - 8 * s, quarter = 4 * r - 1 - 2 * s;
      return {{e(mid, 2 * k, 1), e(big, 8 * r - 4 * k - 2 - 4 * s, 1), e(mid, 0, Rational(3, 2)),
               e(mid, 4 * r - 2 * k - 1 - 2 * s, -1), e(4, 2, -1), e(4, 0, -h), e(quarter, 0, -h), e(big, 0, -h)}};
    }
    case ProofQuotient::Single:
    case ProofQuotient::SingleShifted: {
      const Rational delta = Rational(2 * r) - (info.kind == ProofQuotient::Single ? h : Rational(3, 2));
      return {{e(delta, k, 1), e(delta, 0, h), e(2, h, -1), e(2, 0, -h)}};
    }
  }
  return {};
}

// N, t and N0 as the proofs fix them for the whole family at rank r
struct ProofConstants {
  Integer N, t, N0;
  Integer level() const { return t * N0 * N; }
};

inline ProofConstants proof_constants(const std::string& theorem, int r) {
  if (r < 2) throw std::domain_error("rank must be at least 2");
  if (theorem == "4.1") return {16 * r - 4, 32 * r - 8, 4};
  if (theorem == "4.2") return {4 * r - 1, 32 * r - 8, 16};
  if (theorem == "4.3") return {16 * r - 12, 32 * r - 24, 2};
  if (theorem == "4.4") return {4 * r - 3, 16 * r - 12, 16};
  throw std::invalid_argument("unknown theorem '" + theorem + "'");
}

// Least t and N0 serving every quotient of the theorem for all j at once.
inline ProofConstants family_constants(const std::string& theorem, int r) {
  ProofConstants c = proof_constants(theorem, r);
  Integer t = 1, n0 = 1;
  for (int j = 0; j <= r; ++j)
    for (const auto& label : theorem_quotients(theorem)) {
      const RobinsReport rep = robins_analyze(build_proof_quotients(label, r, j), c.N);
      t = lcm(t, rep.t);
      n0 = lcm(n0, rep.N0);
    }
  c.t = t;
  c.N0 = n0;
  return c;
}

inline Comparison crosscheck_quotient_vs_nahm(const std::string& theorem, int r, int j, FracExp order) {
  const Family f = theorem_family(theorem);
  const Series target = eval_nahm(build_family(f, r, j), order, true);
  Series sum(order);
  for (const auto& label : theorem_quotients(theorem)) sum += eta_quotient(build_proof_quotients(label, r, j), order);
  return series_equal(sum, target);
}

}  // namespace nahmforge
