#pragma once

// Generalized Nahm sums
//
//   f(q) = sum_{n in N^r} (-1)^{n_s} q^{n^T AD n / 2 + n^T b + c} / prod_i (q^{d_i}; q^{d_i})_{n_i}
//
// with AD = A diag(d) symmetric positive definite. The sign factor is
// present only when sign_coord is set.
//
// Exact evaluation walks the lattice coordinate by coordinate. A float
// lower bound on the quadratic form (the minimum over real completions of
// the fixed prefix, via Schur complements) prunes the walk; the bound is
// widened by 10% of the order plus a margin, and every surviving point is
// rechecked with exact integer arithmetic, so floating error can only
// enlarge the search, never drop a term.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "series.hpp"

namespace nahmforge {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct NahmSpec {
  int r = 0;
  RationalMatrix A;
  std::vector<Rational> b;
  Rational c;
  std::vector<int> d;
  std::optional<int> sign_coord;  // 1-based coordinate i adding (-1)^{n_i}
  std::string label;

  RationalMatrix AD() const {
    RationalMatrix m = A;
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) m[i][k] = A[i][k] * d[k];
    return m;
  }
};

enum class Family { T1_1_1, T1_1_2, T1_2, T1_3 };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::T1_1_1: return "T1.1-1";
    case Family::T1_1_2: return "T1.1-2";
    case Family::T1_2: return "T1.2";
    case Family::T1_3: return "T1.3";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "T1.1-1") return Family::T1_1_1;
  if (s == "T1.1-2") return Family::T1_1_2;
  if (s == "T1.2") return Family::T1_2;
  if (s == "T1.3") return Family::T1_3;
  throw std::invalid_argument("unknown Nahm family '" + s + "'");
}

namespace detail {

inline RationalMatrix zero_matrix(int r) { return RationalMatrix(r, std::vector<Rational>(r)); }

// Matrix shared by both symmetrizer-(2,...,2,1) families; only the corner
// entry differs.
inline RationalMatrix matrix_221(int r, const Rational& corner) {
  RationalMatrix A = zero_matrix(r);
  A[0][0] = 1;
  A[0][r - 1] = 1;
  for (int i = 2; i <= r - 1; ++i) {
    for (int k = 2; k <= r - 1; ++k) A[i - 1][k - 1] = 2 * std::min(i - 1, k - 1);
    A[i - 1][r - 1] = 2 * (i - 1);
  }
  A[r - 1][0] = make_rational(1, 2);
  for (int k = 2; k <= r - 1; ++k) A[r - 1][k - 1] = k - 1;
  A[r - 1][r - 1] = corner;
  return A;
}

// Matrix shared by the symmetrizer-(1,...,1,2) families.
inline RationalMatrix matrix_112(int r, const Rational& corner) {
  RationalMatrix A = zero_matrix(r);
  A[0][0] = 1;
  A[0][r - 1] = make_rational(1, 2);
  for (int i = 2; i <= r - 1; ++i) {
    for (int k = 2; k <= r - 1; ++k) A[i - 1][k - 1] = 2 * std::min(i - 1, k - 1);
    A[i - 1][r - 1] = i - 1;
  }
  A[r - 1][0] = 1;
  for (int k = 2; k <= r - 1; ++k) A[r - 1][k - 1] = 2 * (k - 1);
  A[r - 1][r - 1] = corner;
  return A;
}

}  // namespace detail

inline NahmSpec build_family(Family f, int r, int j) {
  if (r < 2 || j < 0 || j > r)
    throw std::domain_error("family " + family_name(f) + " needs r >= 2 and 0 <= j <= r (got r=" + std::to_string(r) +
                            ", j=" + std::to_string(j) + ")");
  NahmSpec s;
  s.r = r;
  s.b.assign(r, Rational(0));
  s.label = family_name(f) + ":r=" + std::to_string(r) + ":j=" + std::to_string(j);
  const bool first = f == Family::T1_1_1 || f == Family::T1_1_2;
  if (first) {
    s.d.assign(r, 2);
    s.d[r - 1] = 1;
  } else {
    s.d.assign(r, 1);
    s.d[r - 1] = 2;
  }
  switch (f) {
    case Family::T1_1_1:
      s.A = detail::matrix_221(r, r - 1);
      if (j == 0) {
        s.c = make_rational(5 - 4 * r, 32 * r - 8);
      } else {
        s.b[0] = 1;
        for (int i = j + 1; i <= r - 1; ++i) s.b[i - 1] = 2 * (i - j);
        s.b[r - 1] = r - j;
        s.c = make_rational((4 * r - 4 * j - 1) * (4 * r - 4 * j - 1), 32 * r - 8);
      }
      break;
    case Family::T1_1_2:
      s.A = detail::matrix_221(r, make_rational(2 * r - 1, 2));
      if (j == 0) {
        s.b[r - 1] = make_rational(-1, 2);
        s.c = make_rational(7 - 4 * r, 32 * r - 24);
      } else {
        s.b[0] = 1;
        for (int i = j + 1; i <= r - 1; ++i) s.b[i - 1] = 2 * (i - j);
        s.b[r - 1] = r - j - 1;
        s.c = make_rational((4 * r - 4 * j - 3) * (4 * r - 4 * j - 3), 32 * r - 24);
      }
      break;
    case Family::T1_2:
      s.A = detail::matrix_112(r, r - 1);
      if (j == 0) {
        s.b[0] = 1;
        for (int i = 2; i <= r; ++i) s.b[i - 1] = i - 1;
        s.c = make_rational(8 * r * r - 14 * r + 5, 32 * r - 8);
      } else {
        for (int i = j + 1; i <= r; ++i) s.b[i - 1] = i - j;
        s.c = make_rational(8 * (r - j) * (r - j) + 4 * j - 6 * r + 1, 32 * r - 8);
      }
      break;
    case Family::T1_3:
      s.A = detail::matrix_112(r, make_rational(2 * r - 1, 2));
      s.sign_coord = r;
      if (j == 0) {
        s.b[0] = 1;
        for (int i = 2; i <= r; ++i) s.b[i - 1] = i - 1;
        s.c = make_rational(4 * r * r - 11 * r + 7, 16 * r - 12);
      } else {
        for (int i = j + 1; i <= r - 1; ++i) s.b[i - 1] = i - j;
        // taken literally: at j = r this entry is -1
        s.b[r - 1] = r - j - 1;
        s.c = make_rational(4 * (r - j) * (r - j) + 6 * j - 7 * r + 3, 16 * r - 12);
      }
      break;
  }
  return s;
}

inline NahmSpec build_capparelli() {
  NahmSpec s;
  s.r = 2;
  s.A = {{Rational(4), Rational(2)}, {Rational(6), Rational(4)}};
  s.b = {Rational(0), Rational(0)};
  s.c = make_rational(-1, 24);
  s.d = {1, 3};
  s.label = "capparelli";
  return s;
}

struct SumCPair {
  NahmSpec first;   // b = (0,...,0,1)
  NahmSpec second;  // b = (1,2,4,...,2(r-2),r), summand shifted by q^shift
  FracExp shift;
};

// The two sums of the SumC identity; c is zero on both since the identity
// carries no prefactor.
inline SumCPair build_sumC(int r) {
  if (r < 3) throw std::domain_error("SumC needs r >= 3 (got " + std::to_string(r) + ")");
  SumCPair p;
  p.first = build_family(Family::T1_1_1, r, 0);
  p.first.c = 0;
  p.first.b.assign(r, Rational(0));
  p.first.b[r - 1] = 1;
  p.first.label = "SumC:r=" + std::to_string(r) + ":first";
  p.second = p.first;
  p.second.b[0] = 1;
  for (int i = 2; i <= r - 1; ++i) p.second.b[i - 1] = 2 * (i - 1);
  p.second.b[r - 1] = r;
  p.second.label = "SumC:r=" + std::to_string(r) + ":second";
  p.shift = FracExp(r - 3, 2);
  return p;
}

// c values attached to the SumC vectors when they appear as components of
// the vector-valued function.
inline Rational sumC_c_first(int r) { return make_rational(37 - 4 * r, 32 * r - 8); }
inline Rational sumC_c_second(int r) { return make_rational((4 * r - 7) * (4 * r - 7), 32 * r - 8); }

inline bool is_well_formed(const NahmSpec& s) {
  if (s.r < 1 || static_cast<int>(s.A.size()) != s.r || static_cast<int>(s.b.size()) != s.r ||
      static_cast<int>(s.d.size()) != s.r)
    return false;
  for (const auto& row : s.A)
    if (static_cast<int>(row.size()) != s.r) return false;
  for (int x : s.d)
    if (x < 1) return false;
  if (s.sign_coord && (*s.sign_coord < 1 || *s.sign_coord > s.r)) return false;
  return true;
}

// Exact symmetry of A diag(d) and positivity of its leading principal minors.
inline bool validate_symmetrizable(const NahmSpec& s) {
  if (!is_well_formed(s)) return false;
  RationalMatrix m = s.AD();
  for (int i = 0; i < s.r; ++i)
    for (int k = 0; k < i; ++k)
      if (m[i][k] != m[k][i]) return false;
  // Gaussian elimination without pivoting: the k-th pivot equals the ratio
  // of consecutive leading minors, so all pivots > 0 iff all minors > 0.
  for (int k = 0; k < s.r; ++k) {
    if (m[k][k] <= 0) return false;
    for (int i = k + 1; i < s.r; ++i) {
      if (m[i][k] == 0) continue;
      Rational f = m[i][k] / m[k][k];
      for (int c = k; c < s.r; ++c) m[i][c] -= f * m[k][c];
    }
  }
  return true;
}

inline void require_valid(const NahmSpec& s) {
  if (!is_well_formed(s)) throw std::domain_error("malformed Nahm spec '" + s.label + "'");
  if (!validate_symmetrizable(s))
    throw std::domain_error("A diag(d) is not symmetric positive definite for '" + s.label + "'");
}

namespace detail {

// Lower bounds for E(n) = n^T M n / 2 + b^T n over real completions of a
// fixed prefix: for p fixed coordinates, E >= prefix^T S_p prefix / 2 +
// lin_p^T prefix + const_p.
class QuadraticBound {
 public:
  QuadraticBound(const std::vector<std::vector<double>>& M, const std::vector<double>& b) : r_(static_cast<int>(b.size())) {
    S_.resize(r_ + 1);
    lin_.resize(r_ + 1);
    cst_.resize(r_ + 1);
    for (int p = 0; p <= r_; ++p) schur(M, b, p);
  }

  int rank() const { return r_; }

  double bound(const std::vector<long>& n, int p) const {
    double v = cst_[p];
    for (int i = 0; i < p; ++i) {
      double row = 0;
      for (int k = 0; k < p; ++k) row += S_[p][i][k] * static_cast<double>(n[k]);
      v += 0.5 * static_cast<double>(n[i]) * row + lin_[p][i] * static_cast<double>(n[i]);
    }
    return v;
  }

  // For coordinate p with prefix n[0..p-1] fixed, the bound at depth p+1 is
  // a x^2 + beta x + gamma in x = n[p]; returns the vertex position.
  double vertex(const std::vector<long>& n, int p) const {
    const auto& S = S_[p + 1];
    double a = 0.5 * S[p][p];
    double beta = lin_[p + 1][p];
    for (int k = 0; k < p; ++k) beta += S[p][k] * static_cast<double>(n[k]);
    return -beta / (2 * a);
  }

  double global_min() const { return cst_[0]; }

 private:
  void schur(const std::vector<std::vector<double>>& M, const std::vector<double>& b, int p) {
    const int q = r_ - p;
    // M22^{-1} via Gauss-Jordan on the trailing block
    std::vector<std::vector<double>> inv(q, std::vector<double>(q, 0.0)), W(q, std::vector<double>(q));
    for (int i = 0; i < q; ++i) {
      inv[i][i] = 1.0;
      for (int k = 0; k < q; ++k) W[i][k] = M[p + i][p + k];
    }
    for (int c = 0; c < q; ++c) {
      int piv = c;
      for (int i = c + 1; i < q; ++i)
        if (std::fabs(W[i][c]) > std::fabs(W[piv][c])) piv = i;
      std::swap(W[c], W[piv]);
      std::swap(inv[c], inv[piv]);
      const double d = W[c][c];
      for (int k = 0; k < q; ++k) {
        W[c][k] /= d;
        inv[c][k] /= d;
      }
      for (int i = 0; i < q; ++i) {
        if (i == c) continue;
        const double f = W[i][c];
        if (f == 0) continue;
        for (int k = 0; k < q; ++k) {
          W[i][k] -= f * W[c][k];
          inv[i][k] -= f * inv[c][k];
        }
      }
    }
    // S = M11 - M12 inv M21, lin = b1 - M12 inv b2, const = -b2^T inv b2 / 2
    S_[p].assign(p, std::vector<double>(p));
    lin_[p].assign(p, 0.0);
    std::vector<std::vector<double>> M12inv(p, std::vector<double>(q, 0.0));
    for (int i = 0; i < p; ++i)
      for (int k = 0; k < q; ++k)
        for (int l = 0; l < q; ++l) M12inv[i][k] += M[i][p + l] * inv[l][k];
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        double v = M[i][j];
        for (int k = 0; k < q; ++k) v -= M12inv[i][k] * M[p + k][j];
        S_[p][i][j] = v;
      }
      double l = b[i];
      for (int k = 0; k < q; ++k) l -= M12inv[i][k] * b[p + k];
      lin_[p][i] = l;
    }
    double c = 0;
    for (int k = 0; k < q; ++k)
      for (int l = 0; l < q; ++l) c -= 0.5 * b[p + k] * inv[k][l] * b[p + l];
    cst_[p] = c;
  }

  int r_;
  std::vector<std::vector<std::vector<double>>> S_;
  std::vector<std::vector<double>> lin_;
  std::vector<double> cst_;
};

inline QuadraticBound make_bound(const NahmSpec& s) {
  const RationalMatrix M = s.AD();
  std::vector<std::vector<double>> Md(s.r, std::vector<double>(s.r));
  std::vector<double> bd(s.r);
  for (int i = 0; i < s.r; ++i) {
    bd[i] = s.b[i].get_d();
    for (int k = 0; k < s.r; ++k) Md[i][k] = M[i][k].get_d();
  }
  return QuadraticBound(Md, bd);
}

// Visits every n in N^r whose float lower bound is below `limit`, pruning
// whole subtrees. enter(depth, n) runs when coordinate depth-1 has just been
// assigned; leaf(n) runs at full depth. `extra` keeps each coordinate loop
// going that many steps past the point where it would stop; `cap` bounds
// every coordinate (negative: unbounded).
struct WalkHooks {
  std::function<void(int depth, const std::vector<long>& n)> enter;
  std::function<void(const std::vector<long>& n)> leaf;
};

inline void walk_lattice(const QuadraticBound& qb, double limit, int extra, long cap, const WalkHooks& hooks,
                         bool* capped = nullptr) {
  const int r = qb.rank();
  std::vector<long> n(r, 0);
  std::function<void(int)> rec = [&](int p) {
    if (p == r) {
      hooks.leaf(n);
      return;
    }
    int overshoot = -1;
    for (long x = 0;; ++x) {
      if (cap >= 0 && x > cap) {
        if (capped && overshoot < 0) *capped = true;
        break;
      }
      n[p] = x;
      // per-coordinate state (partial products) must track every x, pruned or not
      if (hooks.enter) hooks.enter(p + 1, n);
      const double v = qb.bound(n, p + 1);
      if (v >= limit) {
        if (static_cast<double>(x) >= qb.vertex(n, p)) {
          if (overshoot < 0) overshoot = 0;
          if (overshoot++ >= extra) break;
        }
        if (extra == 0 || overshoot < 0) continue;
      }
      rec(p + 1);
    }
    n[p] = 0;
  };
  rec(0);
}

// Exact exponent scaled by L: E(n) * L as a machine integer.
struct ExactExponent {
  std::int64_t L = 1;
  std::vector<std::int64_t> diag;                    // L * M_ii / 2
  std::vector<std::vector<std::int64_t>> off;        // L * M_ij, i < j
  std::vector<std::int64_t> lin;                     // L * b_i
  std::int64_t cst = 0;                              // L * c (if included)

  ExactExponent(const NahmSpec& s, bool include_c) {
    const RationalMatrix M = s.AD();
    Integer l = 1;
    auto fold = [&](const Rational& v) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t()); };
    for (int i = 0; i < s.r; ++i) {
      fold(M[i][i] / 2);
      for (int k = i + 1; k < s.r; ++k) fold(M[i][k]);
      fold(s.b[i]);
    }
    if (include_c) fold(s.c);
    L = l.get_si();
    auto scaled = [&](const Rational& v) { return to_long(v * Rational(L)); };
    diag.resize(s.r);
    lin.resize(s.r);
    off.assign(s.r, std::vector<std::int64_t>(s.r, 0));
    for (int i = 0; i < s.r; ++i) {
      diag[i] = scaled(M[i][i] / 2);
      lin[i] = scaled(s.b[i]);
      for (int k = i + 1; k < s.r; ++k) off[i][k] = scaled(M[i][k]);
    }
    cst = include_c ? scaled(s.c) : 0;
  }

  std::int64_t operator()(const std::vector<long>& n) const {
    std::int64_t v = cst;
    const int r = static_cast<int>(n.size());
    for (int i = 0; i < r; ++i) {
      if (n[i] == 0) continue;
      v += diag[i] * n[i] * n[i] + lin[i] * n[i];
      for (int k = i + 1; k < r; ++k) v += off[i][k] * n[i] * n[k];
    }
    return v;
  }
};

}  // namespace detail

struct EnumOptions {
  int sentinel_extra = 0;  // extra steps per coordinate past the pruning point
};

// Exact truncated expansion of the Nahm sum below `order`. With include_c
// the q^c prefactor is part of the exponent.
inline Series eval_nahm(const NahmSpec& spec, FracExp order, bool include_c, EnumOptions opt = {}) {
  require_valid(spec);
  const detail::QuadraticBound qb = detail::make_bound(spec);
  const detail::ExactExponent E(spec, include_c);
  const int r = spec.r;
  const double cshift = include_c ? spec.c.get_d() : 0.0;
  const double theta = order.to_double();
  const double limit = theta + 0.1 * std::fabs(theta) + 1e-6 - cshift;

  // q-exponents of terms are at least emin; denominators need this many
  // integral powers of q.
  const double emin = qb.global_min() + cshift;
  const std::int64_t lo = static_cast<std::int64_t>(std::floor(emin)) - 1;
  const std::int64_t len = std::max<std::int64_t>(0, order.ceil_scaled(1) - lo + 1);

  const std::int64_t L = E.L;
  const std::int64_t K = order.ceil_scaled(L);  // exclusive, in units of 1/L
  const std::int64_t kbase = lo * L;
  std::vector<Integer> acc(static_cast<std::size_t>(std::max<std::int64_t>(0, K - kbase)));

  // stack of partial products 1/prod_{i<depth} (q^{d_i};q^{d_i})_{n_i}
  std::vector<std::vector<Integer>> partial(r + 1, std::vector<Integer>(len));
  if (len > 0) partial[0][0] = 1;

  detail::WalkHooks hooks;
  hooks.enter = [&](int depth, const std::vector<long>& n) {
    const int i = depth - 1;
    auto& cur = partial[depth];
    if (n[i] == 0) {
      cur = partial[depth - 1];
      return;
    }
    // extend previous value of this coordinate by 1/(1 - q^{d n_i})
    const std::int64_t x = static_cast<std::int64_t>(spec.d[i]) * n[i];
    for (std::int64_t k = x; k < len; ++k)
      if (cur[k - x] != 0) cur[k] += cur[k - x];
  };
  hooks.leaf = [&](const std::vector<long>& n) {
    const std::int64_t k0 = E(n);
    if (k0 >= K) return;
    if (k0 < kbase) throw std::logic_error("lattice point below the computed exponent floor");
    const bool negate = spec.sign_coord && (n[*spec.sign_coord - 1] % 2 != 0);
    const auto& p = partial[r];
    for (std::int64_t m = 0; m < len; ++m) {
      const std::int64_t k = k0 + m * L;
      if (k >= K) break;
      if (p[m] == 0) continue;
      if (negate)
        acc[k - kbase] -= p[m];
      else
        acc[k - kbase] += p[m];
    }
  };
  detail::walk_lattice(qb, limit, opt.sentinel_extra, -1, hooks);
  return Series::from_dense(L, kbase, acc, order);
}

struct NumericValue {
  std::complex<double> value;
  double tail_estimate = 0;
  std::size_t points = 0;
};

namespace detail {

// Shared numeric summation; qpow(E) must return q^E for a rational E.
inline NumericValue sum_nahm_numeric(const NahmSpec& spec, double absq, std::complex<double> q, long n_cap,
                                     const std::function<std::complex<double>(const Rational&)>& qpow) {
  require_valid(spec);
  const QuadraticBound qb = make_bound(spec);
  NumericValue out;
  if (absq == 0.0) {
    out.value = qpow(spec.c);
    return out;
  }
  // stop once |q|^E is below 1e-18 relative to the leading term
  const double ecut = qb.global_min() + std::log(1e-18) / std::log(absq);
  const double limit = ecut + 0.1 * std::fabs(ecut) + 1e-6;
  // 1/(|q|;|q|)_inf bounds every finite denominator
  double inv_poch = 1;
  for (int k = 1; k < 4000; ++k) {
    const double t = std::pow(absq, k);
    inv_poch /= (1 - t);
    if (t < 1e-18) break;
  }
  const ExactExponent E(spec, false);
  std::complex<double> sum = 0;
  bool capped = false;
  WalkHooks hooks;
  hooks.leaf = [&](const std::vector<long>& n) {
    const Rational e = Rational(E(n), E.L);
    if (e.get_d() > limit) return;
    std::complex<double> den = 1;
    for (int i = 0; i < spec.r; ++i) {
      const std::complex<double> qd = std::pow(q, spec.d[i]);
      std::complex<double> qk = qd;
      for (long k = 1; k <= n[i]; ++k, qk *= qd) den *= (1.0 - qk);
    }
    std::complex<double> term = qpow(e) / den;
    if (spec.sign_coord && n[*spec.sign_coord - 1] % 2 != 0) term = -term;
    sum += term;
    ++out.points;
  };
  walk_lattice(qb, limit, 0, n_cap, hooks, &capped);
  std::complex<double> pre = qpow(spec.c);
  out.value = sum * pre;
  const double scale = std::abs(pre) * std::pow(inv_poch, spec.r);
  out.tail_estimate = scale * std::pow(absq, ecut) * static_cast<double>(std::max<std::size_t>(out.points, 1));
  if (capped) {
    // the coordinate cap cut the region short: bound the first excluded shell
    double worst = 0;
    for (int i = 0; i < spec.r; ++i) {
      std::vector<long> n(spec.r, 0);
      n[i] = n_cap + 1;
      worst = std::max(worst, std::pow(absq, qb.bound(n, spec.r)));
    }
    out.tail_estimate = std::max(out.tail_estimate, scale * worst);
  }
  return out;
}

}  // namespace detail

// Floating value of the sum, including the q^c prefactor, at a complex q
// with |q| < 1. Fractional powers use the principal logarithm of q.
inline NumericValue eval_nahm_numeric(const NahmSpec& spec, std::complex<double> q, long n_cap) {
  const double a = std::abs(q);
  if (!(a < 1.0)) throw std::domain_error("numeric evaluation needs |q| < 1");
  const std::complex<double> lq = a == 0 ? std::complex<double>(0) : std::log(q);
  return detail::sum_nahm_numeric(spec, a, q, n_cap, [&](const Rational& e) -> std::complex<double> {
    if (a == 0) return e == 0 ? 1.0 : 0.0;
    return std::exp(e.get_d() * lq);
  });
}

// Same sum at q = exp(2 pi i tau), with every power q^E taken as
// exp(2 pi i E tau) so fractional exponents carry no branch ambiguity.
inline NumericValue eval_nahm_tau(const NahmSpec& spec, std::complex<double> tau, long n_cap) {
  if (!(tau.imag() > 0)) throw std::domain_error("tau must lie in the upper half plane");
  const std::complex<double> twopii(0, 2 * M_PI);
  const std::complex<double> q = std::exp(twopii * tau);
  return detail::sum_nahm_numeric(spec, std::abs(q), q, n_cap,
                                  [&](const Rational& e) { return std::exp(twopii * e.get_d() * tau); });
}

}  // namespace nahmforge
