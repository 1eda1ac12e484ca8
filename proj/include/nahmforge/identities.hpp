#pragma once

// Registry pairing every sum side with its product side (rhs_builder), so an
// identity can be checked by name, rank and index.

#include <string>
#include <vector>

#include "descending.hpp"
#include "nahm.hpp"
#include "products.hpp"

namespace nahmforge {

struct IdentityCase {
  std::string eq;
  int r = 2;
  int j = 0;

  std::string label() const {
    if (eq == "Capparelli") return eq;
    return eq + ":r=" + std::to_string(r) + (j ? ":j=" + std::to_string(j) : "");
  }
};

// Wang's generalized sums in the variables n_1..n_r with N_i = n_{i+1}+...+n_r:
//   1/2 n_1^2 + n_1 N_{r-1} + N_1^2 + ... + N_{r-1}^2 + (linear part)
// over (q;q)_{n_1}...(q;q)_{n_{r-1}}(q^2;q^2)_{n_r}. The linear part is
// n_1 + N_1 + ... + N_{r-1} for j = 0 and N_j + ... + N_{r-1} otherwise.
// The quadratic form is expanded from that description, not copied from a
// family matrix.
inline NahmSpec build_wang_sum(int r, int j) {
  if (r < 2 || j < 0 || j > r) throw std::domain_error("Wang sum needs r >= 2 and 0 <= j <= r");
  // N_i as a 0/1 coefficient row over n_1..n_r (1-based i in 1..r-1)
  auto N = [r](int i) {
    std::vector<Rational> row(r);
    for (int k = i + 1; k <= r; ++k) row[k - 1] = 1;
    return row;
  };
  RationalMatrix M = detail::zero_matrix(r);  // exponent = 1/2 n^T M n + b^T n
  std::vector<Rational> e1(r);
  e1[0] = 1;
  auto add_product = [&](const std::vector<Rational>& u, const std::vector<Rational>& v, const Rational& w) {
    // w * (u.n)(v.n) contributes w (u v^T + v u^T) to M
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) M[a][b] += w * (u[a] * v[b] + v[a] * u[b]);
  };
  add_product(e1, e1, make_rational(1, 2));
  add_product(e1, N(r - 1), 1);
  for (int i = 1; i <= r - 1; ++i) add_product(N(i), N(i), 1);

  NahmSpec s;
  s.r = r;
  s.d.assign(r, 1);
  s.d[r - 1] = 2;
  s.b.assign(r, Rational(0));
  if (j == 0) s.b[0] += 1;
  for (int i = std::max(j, 1); i <= r - 1; ++i) {
    const auto row = N(i);
    for (int k = 0; k < r; ++k) s.b[k] += row[k];
  }
  s.A = detail::zero_matrix(r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) s.A[a][b] = M[a][b] / s.d[b];
  s.c = 0;
  s.label = "Wang:r=" + std::to_string(r) + ":j=" + std::to_string(j);
  return s;
}

// Equations of the identity suite. The printed W1.1 is left out: its product
// side is refuted (see README); its JTP-consistent form is in.
inline const std::vector<std::string>& identity_suite() {
  static const std::vector<std::string> eqs = {"1.7",  "1.8",  "1.9",  "1.10", "1.11", "1.12", "1.13",
                                               "1.14", "W1.1-corrected", "W1.2", "SumC", "2.1a", "2.1b",
                                               "2.1c", "2.1d", "2.2a", "2.2b", "2.3a", "2.3b", "2.4a",
                                               "2.4b", "Capparelli"};
  return eqs;
}

inline int identity_min_rank(const std::string& eq) {
  if (eq == "SumC" || eq == "2.3a" || eq == "2.3b") return 3;
  return 2;
}

inline std::vector<IdentityCase> identity_cases(const std::string& eq, int r_min, int r_max) {
  std::vector<IdentityCase> out;
  if (eq == "Capparelli") return {{eq, 2, 0}};
  for (int r = std::max(r_min, identity_min_rank(eq)); r <= r_max; ++r) {
    if (rhs_takes_j(eq))
      for (int j = 1; j <= r; ++j) out.push_back({eq, r, j});
    else
      out.push_back({eq, r, 0});
  }
  return out;
}

inline std::vector<IdentityCase> identity_cases(int r_min, int r_max) {
  std::vector<IdentityCase> out;
  for (const auto& eq : identity_suite()) {
    auto part = identity_cases(eq, r_min, r_max);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline Series identity_lhs(const IdentityCase& c, FracExp order) {
  const std::string& eq = c.eq;
  auto nahm = [&](Family f, int j) { return eval_nahm(build_family(f, c.r, j), order, false); };
  if (eq == "1.7") return nahm(Family::T1_1_1, 0);
  if (eq == "1.8") return nahm(Family::T1_1_1, c.j);
  if (eq == "1.9") return nahm(Family::T1_1_2, 0);
  if (eq == "1.10") return nahm(Family::T1_1_2, c.j);
  if (eq == "1.11") return nahm(Family::T1_2, 0);
  if (eq == "1.12") return nahm(Family::T1_2, c.j);
  if (eq == "1.13") return nahm(Family::T1_3, 0);
  if (eq == "1.14") return nahm(Family::T1_3, c.j);
  if (eq == "W1.1" || eq == "W1.1-corrected") return eval_nahm(build_wang_sum(c.r, 0), order, false);
  if (eq == "W1.2") return eval_nahm(build_wang_sum(c.r, c.j), order, false);
  if (eq == "Capparelli") return eval_nahm(build_capparelli(), order, false);
  if (eq == "SumC") {
    const SumCPair p = build_sumC(c.r);
    Series s = eval_nahm(p.first, order, false);
    if (p.shift < order) s += eval_nahm(p.second, order - p.shift, false).shifted(p.shift);
    return s;
  }
  return eval_descending({parse_tag(eq), c.r, c.j}, order);
}

inline Comparison check_identity(const IdentityCase& c, FracExp order) {
  return series_equal(identity_lhs(c, order), rhs_builder(c.eq, c.r, c.j, order));
}

// Order used by the full suite: 60 for r <= 3, 40 beyond.
inline FracExp suite_order(int r) { return FracExp(r <= 3 ? 60 : 40); }

}  // namespace nahmforge
