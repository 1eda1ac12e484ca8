#pragma once

// Floating evaluation of the vector-valued functions
//
//   G(tau) = (g^v_1, ..., g^v_{2r-1}, g_1, ..., g_{2r-1})^T
//   H(tau) = (h^v_1, ..., h^v_{2r-2}, h_1, ..., h_{2r-2})^T
//
// and numeric checks of their S-, T- and composite transformation laws,
// the eta/Weber and theta transformation formulas they rest on, and their
// relation to the Nahm sums.
//
// Every fractional power q^a is exp(2 pi i a tau), computed from tau.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nahm.hpp"

namespace nahmforge {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class VFamily { G, H };
enum class Which { Vee, Plain };

// h_j carries the factor (-1)^{j(j-1)/2} on its second product, like g_j.
// Without it the dual law h(-1/(2tau)) = S~ h^v(tau) fails; Untwisted keeps
// the sign-free form (with its matching T~) for auditing.
enum class HPlain { Twisted, Untwisted };

inline double quarter_sign(int j) { return ((j * (j - 1) / 2) % 2) ? -1.0 : 1.0; }  // (-1)^{j(j-1)/2}

inline std::string family_name(VFamily f) { return f == VFamily::G ? "G" : "H"; }

inline VFamily parse_vfamily(const std::string& s) {
  if (s == "G") return VFamily::G;
  if (s == "H") return VFamily::H;
  throw std::invalid_argument("family must be G or H (got '" + s + "')");
}

struct ComplexPoint {
  cplx tau;

  explicit ComplexPoint(cplx t) : tau(t) {
    if (!(t.imag() > 0)) throw std::domain_error("tau must lie in the upper half plane");
  }
  // q^a = exp(2 pi i a tau)
  cplx pw(double a) const { return std::exp(cplx(0, 2 * M_PI * a) * tau); }
  cplx q() const { return pw(1); }
  cplx q_half() const { return pw(0.5); }
};

struct TransformSpec {
  VFamily family;
  int r;
  int dimension() const { return family == VFamily::G ? 2 * r - 1 : 2 * r - 2; }
};

inline void require_transform_rank(int r) {
  if (r < 2) throw std::domain_error("rank must be at least 2 (got " + std::to_string(r) + ")");
}

struct ComplexValue {
  cplx value;
  double tail = 0;  // relative bound on the truncated Pochhammer tails
};

inline constexpr int kDefaultTerms = 400;
inline constexpr double kTailLimit = 1e-14;

namespace detail {

// prod_{n<terms} (1 - a b^n)
inline cplx poch_num(cplx a, cplx b, int terms) {
  cplx p = 1, x = a;
  for (int n = 0; n < terms; ++n) {
    p *= 1.0 - x;
    x *= b;
  }
  return p;
}

inline cplx triple_num(cplx a, cplx b, cplx c, cplx base, int terms) {
  return poch_num(a, base, terms) * poch_num(b, base, terms) * poch_num(c, base, terms);
}

// The slowest base in every component is x^4 with x the component's own
// nome, and each product has at most a dozen factors.
inline double tail_bound(double absx, int terms) {
  const double b = std::pow(absx, 4);
  return 12 * std::pow(b, terms) / (1 - b);
}

inline void check_terms(double tail, int terms) {
  if (terms < 100) throw std::domain_error("at least 100 Pochhammer factors are required");
  if (tail > kTailLimit)
    throw std::domain_error("Im tau too small for the requested number of factors (tail bound " +
                            std::to_string(tail) + ")");
}

inline cplx neg_pow(cplx x, int n) { return (n % 2 ? -1.0 : 1.0) * x; }  // (-1)^n x

}  // namespace detail

// One component of G or H at tau. j runs over 1..2r-1 (G) or 1..2r-2 (H).
inline ComplexValue eval_component(VFamily fam, Which which, int r, int j, cplx tau, int terms = kDefaultTerms,
                                   HPlain hp = HPlain::Twisted) {
  require_transform_rank(r);
  const int dim = TransformSpec{fam, r}.dimension();
  if (j < 1 || j > dim) throw std::domain_error("component index out of range");
  // plain components are defined through their value at 2 tau
  const ComplexPoint p(which == Which::Vee ? tau : tau / 2.0);
  const double tail = detail::tail_bound(std::abs(p.q()), terms);
  detail::check_terms(tail, terms);
  using detail::triple_num;
  auto Q = [&](double a) { return p.pw(a); };
  const double rr = r, jj = j;
  cplx v;
  if (fam == VFamily::G && which == Which::Vee) {
    const double lead = (4 * rr - 4 * jj + 1) * (4 * rr - 4 * jj + 1) / (32 * rr - 8);
    const cplx den1 = triple_num(Q(1), Q(3), Q(4), Q(4), terms);
    const cplx den2 = triple_num(Q(2), Q(2), Q(4), Q(4), terms);
    const cplx t1 = Q(lead + (2 * jj - rr - 1) / 2) *
                    triple_num(Q(8 * r - 4 * j), Q(8 * r + 4 * j - 4), Q(16 * r - 4), Q(16 * r - 4), terms) / den1;
    const cplx base = -Q(4 * r - 1);
    const cplx t2 = Q(lead) * triple_num(-Q(2 * j - 1), Q(4 * r - 2 * j), base, base, terms) / den2;
    v = t1 + t2;
  } else if (fam == VFamily::G) {
    const double lead = (2 * jj * jj - 2 * jj - 2 * rr + 1) / (16 * rr - 4);
    const cplx t1 = triple_num(Q(2 * r - j), Q(2 * r + j - 1), Q(4 * r - 1), Q(4 * r - 1), terms) /
                    triple_num(Q(1), Q(3), Q(4), Q(4), terms);
    const cplx base = -Q(4 * r - 1);
    const cplx t2 = quarter_sign(j) *
                    triple_num(detail::neg_pow(Q(2 * r - j), 2 * r - j), detail::neg_pow(Q(2 * r + j - 1), 2 * r + j - 1),
                               base, base, terms) /
                    triple_num(-Q(1), -Q(3), Q(4), Q(4), terms);
    v = 0.5 * Q(lead) * (t1 + t2);
  } else if (which == Which::Vee) {
    const double lead = (4 * jj - 4 * rr + 1) * (4 * jj - 4 * rr + 1) / (32 * rr - 24);
    const cplx den1 = triple_num(Q(1), Q(3), Q(4), Q(4), terms);
    const cplx den2 = triple_num(Q(2), Q(2), Q(4), Q(4), terms);
    const cplx t1 = Q(lead + (4 * jj - 2 * rr - 1) / 4) *
                    triple_num(Q(4 * (2 * r - 1 - j)), Q(8 * r + 4 * j - 8), Q(16 * r - 12), Q(16 * r - 12), terms) /
                    den1;
    const cplx base = -Q(4 * r - 3);
    const cplx t2 = Q(lead) * triple_num(Q(2 * (2 * r - j - 1)), -Q(2 * j - 1), base, base, terms) / den2;
    v = t1 + t2;
  } else {
    const double lead = (jj * jj - jj - rr + 1) / (8 * rr - 6);
    const cplx t1 = triple_num(Q(2 * r - j - 1), Q(2 * r + j - 2), Q(4 * r - 3), Q(4 * r - 3), terms) /
                    triple_num(Q(1), Q(3), Q(4), Q(4), terms);
    const cplx base = -Q(4 * r - 3);
    const double sg = hp == HPlain::Twisted ? quarter_sign(j) : 1.0;
    const cplx t2 = sg * triple_num(detail::neg_pow(Q(2 * r - j - 1), 2 * r - j - 1),
                               detail::neg_pow(Q(2 * r + j - 2), 2 * r + j - 2), base, base, terms) /
                    triple_num(-Q(1), -Q(3), Q(4), Q(4), terms);
    v = 0.5 * Q(lead) * (t1 + t2);
  }
  return {v, tail};
}

// g^v or g (h^v or h) as a vector
inline CVector eval_half(VFamily fam, Which which, int r, cplx tau, int terms = kDefaultTerms,
                         HPlain hp = HPlain::Twisted) {
  const int dim = TransformSpec{fam, r}.dimension();
  CVector v(dim);
  for (int j = 1; j <= dim; ++j) v(j - 1) = eval_component(fam, which, r, j, tau, terms, hp).value;
  return v;
}

// G or H
inline CVector eval_vector(VFamily fam, int r, cplx tau, int terms = kDefaultTerms, HPlain hp = HPlain::Twisted) {
  const CVector a = eval_half(fam, Which::Vee, r, tau, terms), b = eval_half(fam, Which::Plain, r, tau, terms, hp);
  CVector v(a.size() + b.size());
  v << a, b;
  return v;
}

// Least factor count that keeps the tail bound below the limit at tau.
inline int terms_for(cplx tau, int at_least = kDefaultTerms) {
  const double im = tau.imag() / 2;  // plain components use tau/2
  const double per = 4 * 2 * M_PI * im;
  const int need = static_cast<int>(std::ceil((std::log(12.0) - std::log(kTailLimit * 1e-2)) / per)) + 1;
  return std::max(at_least, need);
}

// ---------------------------------------------------------------------------
// Matrices

// s_{jk} = sqrt(2/N) cos((2j-1)(2k-1) pi / (2N)), m = (N-1)/2 rows
inline Eigen::MatrixXd cosine_matrix(int N) {
  const int m = (N - 1) / 2;
  Eigen::MatrixXd S(m, m);
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= m; ++k) S(j - 1, k - 1) = std::sqrt(2.0 / N) * std::cos((2 * j - 1) * (2 * k - 1) * M_PI / (2.0 * N));
  return S;
}

inline Eigen::MatrixXd build_S(int r) {
  require_transform_rank(r);
  return cosine_matrix(4 * r - 1);
}

inline Eigen::MatrixXd build_S_tilde(int r) {
  require_transform_rank(r);
  return cosine_matrix(4 * r - 3);
}

inline Eigen::MatrixXd build_S(VFamily f, int r) { return f == VFamily::G ? build_S(r) : build_S_tilde(r); }

inline cplx phase(double x) { return std::exp(cplx(0, M_PI * x)); }  // e^{pi i x}

// T: g^v(tau+2) = T g^v(tau)  /  h^v(tau+4) = T h^v(tau)
inline CMatrix build_T(VFamily f, int r) {
  const int dim = TransformSpec{f, r}.dimension();
  CMatrix T = CMatrix::Zero(dim, dim);
  for (int j = 1; j <= dim; ++j) {
    const double x = f == VFamily::G ? (4.0 * r - 4 * j + 1) * (4.0 * r - 4 * j + 1) / (8.0 * r - 2)
                                     : (4.0 * j - 4 * r + 1) * (4.0 * j - 4 * r + 1) / (4.0 * r - 3);
    T(j - 1, j - 1) = phase(x);
  }
  return T;
}

// T~: g(tau+1) = T~ g(tau)  /  h(tau+1) = T~ h(tau)
inline CMatrix build_T_tilde(VFamily f, int r, HPlain hp = HPlain::Twisted) {
  const int dim = TransformSpec{f, r}.dimension();
  CMatrix T = CMatrix::Zero(dim, dim);
  for (int j = 1; j <= dim; ++j) {
    if (f == VFamily::G) {
      T(j - 1, j - 1) = quarter_sign(j) * phase((2.0 * j * j - 2 * j - 2 * r + 1) / (16.0 * r - 4));
    } else {
      const double sg = hp == HPlain::Twisted ? quarter_sign(j) : 1.0;
      T(j - 1, j - 1) = sg * phase((1.0 * j * j - j - r + 1) / (8.0 * r - 6));
    }
  }
  return T;
}

// T': g^v(tau+1) = T' g^v(tau), odd r only
inline CMatrix build_T_prime(int r) {
  if (r % 2 == 0) throw std::domain_error("the unit translation law for g^v needs odd r");
  const int dim = 2 * r - 1;
  CMatrix T = CMatrix::Zero(dim, dim);
  for (int j = 1; j <= dim; ++j) T(j - 1, j - 1) = phase((4.0 * r - 4 * j + 1) * (4.0 * r - 4 * j + 1) / (16.0 * r - 4));
  return T;
}

// P = [[0, 2S], [S, 0]]
inline CMatrix build_P(VFamily f, int r) {
  const Eigen::MatrixXd S = build_S(f, r);
  const auto m = S.rows();
  CMatrix P = CMatrix::Zero(2 * m, 2 * m);
  P.block(0, m, m, m) = (2 * S).cast<cplx>();
  P.block(m, 0, m, m) = S.cast<cplx>();
  return P;
}

inline CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix M = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  M.topLeftCorner(a.rows(), a.cols()) = a;
  M.bottomRightCorner(b.rows(), b.cols()) = b;
  return M;
}

// Q = diag(T, T~^2) for G, diag(T, T~^4) for H
inline CMatrix build_Q(VFamily f, int r) {
  const CMatrix tt = build_T_tilde(f, r);
  return block_diag(build_T(f, r), f == VFamily::G ? CMatrix(tt * tt) : CMatrix(tt * tt * tt * tt));
}

inline CMatrix build_Q_prime(int r) { return block_diag(build_T_prime(r), build_T_tilde(VFamily::G, r)); }

// ---------------------------------------------------------------------------
// Reports

struct Residual {
  std::string name;
  double absolute = 0;
  double relative = 0;  // absolute / max(1, |rhs|_inf)
};

struct TransformReport {
  VFamily family = VFamily::G;
  int r = 0;
  cplx tau;
  double tol = 0;
  int terms = 0;
  std::vector<Residual> residuals;
  bool pass = true;

  void add(const std::string& name, const CVector& lhs, const CVector& rhs) {
    Residual res{name, (lhs - rhs).cwiseAbs().maxCoeff(), 0};
    res.relative = res.absolute / std::max(1.0, rhs.cwiseAbs().maxCoeff());
    pass = pass && res.relative < tol;
    residuals.push_back(res);
  }

  nlohmann::json to_json() const {
    nlohmann::json res = nlohmann::json::object();
    for (const auto& x : residuals) res[x.name] = x.relative;
    return {{"family", family_name(family)}, {"r", r},     {"tau", {tau.real(), tau.imag()}},
            {"residuals", res},              {"tol", tol}, {"pass", pass}};
  }
};

inline TransformReport make_report(VFamily f, int r, cplx tau, double tol, int terms) {
  require_transform_rank(r);
  TransformReport rep;
  rep.family = f;
  rep.r = r;
  rep.tau = tau;
  rep.tol = tol;
  rep.terms = terms;
  return rep;
}

// g(-1/(2tau)) = S g^v(tau) and g^v(-1/(2tau)) = 2S g(tau); same shape for h
inline TransformReport check_dual_transform(VFamily f, int r, cplx tau, int terms = kDefaultTerms, double tol = 1e-8,
                                            HPlain hp = HPlain::Twisted) {
  TransformReport rep = make_report(f, r, tau, tol, terms);
  const cplx s = -1.0 / (2.0 * tau);
  const CMatrix S = build_S(f, r).cast<cplx>();
  const CVector vee = eval_half(f, Which::Vee, r, tau, terms), plain = eval_half(f, Which::Plain, r, tau, terms, hp);
  rep.add("plain(-1/(2tau)) = S vee(tau)", eval_half(f, Which::Plain, r, s, terms, hp), S * vee);
  rep.add("vee(-1/(2tau)) = 2S plain(tau)", eval_half(f, Which::Vee, r, s, terms), 2.0 * S * plain);
  return rep;
}

inline TransformReport check_translations(VFamily f, int r, cplx tau, double tol = 1e-8, int terms = kDefaultTerms,
                                          HPlain hp = HPlain::Twisted) {
  TransformReport rep = make_report(f, r, tau, tol, terms);
  const CVector vee = eval_half(f, Which::Vee, r, tau, terms), plain = eval_half(f, Which::Plain, r, tau, terms, hp);
  const double step = f == VFamily::G ? 2 : 4;
  rep.add(f == VFamily::G ? "vee(tau+2) = T vee(tau)" : "vee(tau+4) = T vee(tau)",
          eval_half(f, Which::Vee, r, tau + step, terms), build_T(f, r) * vee);
  rep.add("plain(tau+1) = T~ plain(tau)", eval_half(f, Which::Plain, r, tau + 1.0, terms, hp),
          build_T_tilde(f, r, hp) * plain);
  if (f == VFamily::G && r % 2 == 1)
    rep.add("vee(tau+1) = T' vee(tau)", eval_half(f, Which::Vee, r, tau + 1.0, terms), build_T_prime(r) * vee);
  return rep;
}

// G(tau/(4tau+1)) = P Q^-1 P G(tau) (and the Gamma_0(2) pair for odd r);
// H(tau/(8tau+1)) = P Q^-1 P H(tau). The factor count follows the smallest
// imaginary part involved.
inline TransformReport check_group_composites(VFamily f, int r, cplx tau, double tol = 1e-8, int terms = 0,
                                              HPlain hp = HPlain::Twisted) {
  const double c = f == VFamily::G ? 4 : 8;
  const cplx image = tau / (c * tau + 1.0);
  const cplx half_image = tau / (2.0 * tau + 1.0);
  double lowest = std::min(tau.imag(), image.imag());
  if (f == VFamily::G && r % 2 == 1) lowest = std::min(lowest, half_image.imag());
  if (terms <= 0) terms = terms_for(cplx(0, lowest));
  TransformReport rep = make_report(f, r, tau, tol, terms);
  const CVector v = eval_vector(f, r, tau, terms, hp);
  const CMatrix P = build_P(f, r), Q = build_Q(f, r);
  const double step = f == VFamily::G ? 2 : 4;
  rep.add(f == VFamily::G ? "G(tau+2) = Q G(tau)" : "H(tau+4) = Q H(tau)", eval_vector(f, r, tau + step, terms, hp), Q * v);
  rep.add(f == VFamily::G ? "G(tau/(4tau+1)) = P Q^-1 P G(tau)" : "H(tau/(8tau+1)) = P Q^-1 P H(tau)",
          eval_vector(f, r, image, terms, hp), P * Q.inverse() * P * v);
  if (f == VFamily::G && r % 2 == 1) {
    const CMatrix Qp = build_Q_prime(r);
    rep.add("G(tau+1) = Q' G(tau)", eval_vector(f, r, tau + 1.0, terms), Qp * v);
    rep.add("G(tau/(2tau+1)) = P Q'^-1 P G(tau)", eval_vector(f, r, half_image, terms), P * Qp.inverse() * P * v);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Eta, Weber and theta functions

enum class EtaWeber { Eta, F, F1, F2 };

inline EtaWeber parse_eta_weber(const std::string& s) {
  if (s == "eta") return EtaWeber::Eta;
  if (s == "f") return EtaWeber::F;
  if (s == "f1") return EtaWeber::F1;
  if (s == "f2") return EtaWeber::F2;
  throw std::invalid_argument("expected eta, f, f1 or f2 (got '" + s + "')");
}

// eta = q^{1/24}(q;q), f = q^{-1/48}(-q^{1/2};q), f1 = q^{-1/48}(q^{1/2};q), f2 = q^{1/24}(-q;q)
inline cplx eval_eta_weber(EtaWeber which, cplx tau, int terms = kDefaultTerms) {
  const ComplexPoint p(tau);
  if (terms < 100) throw std::domain_error("at least 100 Pochhammer factors are required");
  switch (which) {
    case EtaWeber::Eta:
      return p.pw(1.0 / 24) * detail::poch_num(p.q(), p.q(), terms);
    case EtaWeber::F:
      return p.pw(-1.0 / 48) * detail::poch_num(-p.q_half(), p.q(), terms);
    case EtaWeber::F1:
      return p.pw(-1.0 / 48) * detail::poch_num(p.q_half(), p.q(), terms);
    case EtaWeber::F2:
      return p.pw(1.0 / 24) * detail::poch_num(-p.q(), p.q(), terms);
  }
  return 0;
}

enum class ThetaKind { H, G };

// h_{j,m} = sum q^{m(k + j/(2m))^2}, g_{j,m} = sum (-1)^k q^{m(k + j/(2m))^2}
inline cplx eval_theta_numeric(ThetaKind kind, double j, double m, cplx tau, int terms = kDefaultTerms) {
  if (!(m > 0)) throw std::domain_error("theta series needs m > 0");
  const ComplexPoint p(tau);
  cplx s = 0;
  for (int k = -terms; k <= terms; ++k) {
    const double x = k + j / (2 * m);
    const cplx t = p.pw(m * x * x);
    s += (kind == ThetaKind::G && (k % 2 != 0)) ? -t : t;
  }
  return s;
}

// product forms: h = q^{j^2/4m}(-q^{m-j}, -q^{m+j}, q^{2m}; q^{2m}), g likewise with plus signs
inline cplx eval_theta_product(ThetaKind kind, double j, double m, cplx tau, int terms = kDefaultTerms) {
  const ComplexPoint p(tau);
  const double s = kind == ThetaKind::H ? -1 : 1;
  return p.pw(j * j / (4 * m)) *
         detail::triple_num(s * p.pw(m - j), s * p.pw(m + j), p.pw(2 * m), p.pw(2 * m), terms);
}

// g_{j,m}(-1/tau) = (-i tau)^{1/2}/sqrt(2m) sum_{0<=k<=4m-1, k odd} e^{pi i j k/(2m)} h_{k/2,m}(tau)
inline std::pair<cplx, cplx> lemma_theta_S(double j, double m, cplx tau, int terms = 60) {
  const cplx lhs = eval_theta_numeric(ThetaKind::G, j, m, -1.0 / tau, terms);
  cplx sum = 0;
  for (int k = 1; k <= static_cast<int>(std::floor(4 * m - 1)); k += 2)
    sum += phase(j * k / (2 * m)) * eval_theta_numeric(ThetaKind::H, k / 2.0, m, tau, terms);
  return {lhs, std::sqrt(cplx(0, -1) * tau) / std::sqrt(2 * m) * sum};
}

struct ThetaST4Params {
  cplx epsilon;
  long delta;
};

// epsilon_m per the table (m = 1, 3 mod 4) and delta_m with 4 delta_m = 1 mod m
inline ThetaST4Params default_theta_params(long m) {
  if (m % 2 == 0) throw std::domain_error("m must be odd");
  long d = 0;
  while ((4 * d) % m != 1 % m) ++d;
  return {m % 4 == 1 ? cplx(1) : cplx(0, 1), d};
}

// g_{j,m}(-(tau+1)/(4tau)) = sqrt(-tau/m) eps_m sum_{1<=l<=m-1, l odd}
//   (e^{pi i (1-(j+l)-(j+l-2)^2 delta_m)/(2m)} + e^{pi i (1-(j-l)-(j-l-2)^2 delta_m)/(2m)}) g_{l,m}((tau+1)/4)
inline std::pair<cplx, cplx> lemma_theta_ST4(long j, long m, cplx tau, ThetaST4Params prm, int terms = 60) {
  const cplx lhs = eval_theta_numeric(ThetaKind::G, j, m, -(tau + 1.0) / (4.0 * tau), terms);
  const cplx arg = (tau + 1.0) / 4.0;
  cplx sum = 0;
  const double dm = static_cast<double>(prm.delta), mm = static_cast<double>(m);
  for (long l = 1; l <= m - 1; l += 2) {
    const double a = j + l - 2, b = j - l - 2;
    const cplx c = phase((1.0 - (j + l) - a * a * dm) / (2 * mm)) + phase((1.0 - (j - l) - b * b * dm) / (2 * mm));
    sum += c * eval_theta_numeric(ThetaKind::G, l, m, arg, terms);
  }
  return {lhs, std::sqrt(-tau / mm) * prm.epsilon * sum};
}

// ---------------------------------------------------------------------------
// Components that are Nahm sums

struct ConsistencyItem {
  std::string name;
  cplx component, nahm;
  double residual() const { return std::abs(component - nahm); }
};

// With F(tau) = f~_{A,b,c,d}(tau) one has f~_{A,2b,2c,2d}(tau) = F(2tau), and
// shifting tau by 1/2 there moves the q^{2c} prefactor by e(c). The plain
// components are the even/odd parts in q, so that phase is divided out:
//   plain_k(2tau) = (F(2tau) + s_k e(-c) F(2tau+1)) / 2
// where s_k is the sign on the second product of plain_k.
inline cplx half_period_average(const NahmSpec& s, cplx tau, double sign, long n_cap) {
  const cplx phase_c = std::exp(cplx(0, -2 * M_PI * s.c.get_d()));
  return 0.5 * (eval_nahm_tau(s, 2.0 * tau, n_cap).value + sign * phase_c * eval_nahm_tau(s, 2.0 * tau + 1.0, n_cap).value);
}

inline std::vector<ConsistencyItem> nahm_consistency(VFamily f, int r, cplx tau, long n_cap = 60,
                                                     int terms = kDefaultTerms, HPlain hp = HPlain::Twisted) {
  require_transform_rank(r);
  std::vector<ConsistencyItem> out;
  auto at = [&](const NahmSpec& s) { return eval_nahm_tau(s, tau, n_cap).value; };
  auto vee = [&](int j) { return eval_component(f, Which::Vee, r, j, tau, terms).value; };
  auto plain2 = [&](int j) { return eval_component(f, Which::Plain, r, j, 2.0 * tau, terms, hp).value; };
  auto name = [](const std::string& lhs, int k, const std::string& rhs, int j) {
    return lhs + "_" + std::to_string(k) + " = " + rhs + " j=" + std::to_string(j);
  };
  if (f == VFamily::G) {
    out.push_back({name("g^v", 1, "T1.1-1", 0), vee(1), at(build_family(Family::T1_1_1, r, 0))});
    for (int k = r; k <= 2 * r - 1; ++k)
      out.push_back({name("g^v", k, "T1.1-1", 2 * r - k), vee(k), at(build_family(Family::T1_1_1, r, 2 * r - k))});
    for (int k = 2; k <= 2 * r - 1; ++k) {
      if (k % 2 == 1 && k != 2 * r - 1) continue;
      const int j = k == 2 * r - 1 ? 0 : r - k / 2;
      out.push_back({name("g(2tau)", k, "half-period T1.2", j), plain2(k),
                     half_period_average(build_family(Family::T1_2, r, j), tau, quarter_sign(k), n_cap)});
    }
    if (r >= 3) {
      SumCPair p = build_sumC(r);
      p.first.c = sumC_c_first(r);
      p.second.c = sumC_c_second(r);
      out.push_back({"g^v_2 = SumC pair", vee(2), at(p.first) + at(p.second)});
    }
  } else {
    out.push_back({name("h^v", 1, "T1.1-2", 0), vee(1), at(build_family(Family::T1_1_2, r, 0))});
    for (int k = r - 1; k <= 2 * r - 2; ++k)
      out.push_back({name("h^v", k, "T1.1-2", 2 * r - k - 1), vee(k), at(build_family(Family::T1_1_2, r, 2 * r - k - 1))});
    for (int k = 1; k <= 2 * r - 2; ++k) {
      if (k % 2 == 0 && k != 2 * r - 2) continue;
      const int j = k == 2 * r - 2 ? 0 : r - (k + 1) / 2;
      const double sg = hp == HPlain::Twisted ? quarter_sign(k) : 1.0;
      out.push_back({name("h(2tau)", k, "half-period T1.3", j), plain2(k),
                     half_period_average(build_family(Family::T1_3, r, j), tau, sg, n_cap)});
    }
  }
  return out;
}

}  // namespace nahmforge
