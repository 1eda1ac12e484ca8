#include <catch2/catch_amalgamated.hpp>

#include <nahmforge/bailey.hpp>

#include "oracle.hpp"

using namespace nahmforge;

namespace {

// (q^a, q^b, q^M; q^M)_inf / (q;q)_inf over integer exponents below K
oracle::Poly triple_over_qq(int a, int b, int M, int K) {
  oracle::Poly p = oracle::one(K);
  for (int base : {a, b, M})
    for (int x = base; x < K; x += M) p = oracle::times_binomial(p, x, -1);
  for (int k = 1; k < K; ++k) p = oracle::mul(p, oracle::geometric(K, k, 1));
  return p;
}

// 1 / prod_{i<n} (1 - q^{e + i t}), integer exponents below K
oracle::Poly inv_finite(int e, int t, int n, int K) {
  oracle::Poly p = oracle::one(K);
  for (int i = 0; i < n; ++i)
    if (e + i * t < K) p = oracle::mul(p, oracle::geometric(K, e + i * t, 1));
  return p;
}

Series alpha_expect(std::initializer_list<std::pair<FracExp, int>> terms, FracExp order) {
  Series s(order, 4);
  for (const auto& [e, c] : terms)
    if (e < order) s += Series::monomial(e, c, order);
  return s;
}

}  // namespace

TEST_CASE("every catalogued pair satisfies the defining relation", "[bailey]") {
  REQUIRE(catalogue_tags().size() == 17);
  for (const auto& tag : catalogue_tags()) {
    INFO(tag);
    const PairReport rep = verify_pair(catalogue(tag), 6, FracExp(30));
    CHECK(rep.ok);
    if (!rep.ok) WARN(rep.str());
  }
}

TEST_CASE("the second Wang pair as printed fails at n = 1", "[bailey]") {
  // the printed beta divides by (q;q^2)_n; the convolution needs (q^2;q^2)_n
  const PairReport rep = verify_pair(catalogue("W2-printed"), 6, FracExp(30));
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.n == 1);
  CHECK(rep.mismatch->exponent == FracExp(2));
  CHECK(rep.mismatch->lhs == 2);
  CHECK(rep.mismatch->rhs == 1);
}

TEST_CASE("catalogue entries at small n", "[bailey]") {
  const FracExp o(20);
  const BaileyPair c1 = catalogue("C1");
  CHECK(c1.a_exp() == FracExp(0));
  CHECK(series_equal(c1.alpha(0, o), Series::one(o)));
  CHECK(c1.alpha(1, o).is_zero());
  CHECK(series_equal(c1.alpha(2, o), alpha_expect({{2, -1}, {4, -1}}, o)));
  CHECK(series_equal(c1.alpha(4, o), alpha_expect({{10, 1}, {14, 1}}, o)));
  CHECK(series_equal(c1.alpha(-1, o), Series(o)));
  // beta_n = 1/((q;q)_n (q;q^2)_n), checked against a plain expansion
  for (int n = 0; n <= 4; ++n)
    CHECK(oracle::matches(c1.beta(n, o), oracle::mul(inv_finite(1, 1, n, 20), inv_finite(1, 2, n, 20)), 1));

  const BaileyPair g5 = catalogue("G5");
  CHECK(g5.a_exp() == FracExp(1));
  // alpha_1 = -(1 - q^{3/2})/(1 - q^{1/2}) = -(1 + q^{1/2} + q)
  CHECK(series_equal(g5.alpha(1, o), alpha_expect({{0, -1}, {FracExp(1, 2), -1}, {1, -1}}, o)));

  // G4** carries quarter exponents: alpha_2 = q^{-1/2} (1 - q^5)/(1 - q)
  const BaileyPair g44 = catalogue("G4**");
  CHECK(series_equal(g44.alpha(2, o),
                     alpha_expect({{FracExp(-1, 2), 1}, {FracExp(1, 2), 1}, {FracExp(3, 2), 1}, {FracExp(5, 2), 1},
                                   {FracExp(7, 2), 1}},
                                  o)));

  // W1: beta_0 = 1 + q^{-1} - q^{-1} = 1
  CHECK(series_equal(catalogue("W1").beta(0, o), Series::one(o)));
  // the second Wang pair starts at 1 + q^{1/2} + q on both sides
  const BaileyPair w2 = catalogue("W2");
  CHECK(series_equal(w2.alpha(0, o), w2.beta(0, o)));
  CHECK(series_equal(w2.alpha(0, o), alpha_expect({{0, 1}, {FracExp(1, 2), 1}, {1, 1}}, o)));

  CHECK_THROWS_AS(catalogue("C2"), std::invalid_argument);
}

TEST_CASE("the relation against an independent convolution", "[bailey]") {
  // C3 relative to a = q, expanded with plain integer vectors
  const int K = 25;
  const BaileyPair c3 = catalogue("C3");
  auto alpha = [](int n) -> std::pair<int, int> {  // (sign, exponent)
    const int m = n / 2;
    if (n % 2 == 0) return {m % 2 ? -1 : 1, 3 * m * m + m};
    return {(m + 1) % 2 ? -1 : 1, 3 * m * m + 5 * m + 2};
  };
  for (int n = 0; n <= 5; ++n) {
    oracle::Poly conv(K, 0);
    for (int r = 0; r <= n; ++r) {
      const auto [sg, e] = alpha(r);
      if (e >= K) continue;
      const oracle::Poly f = oracle::mul(inv_finite(1, 1, n - r, K), inv_finite(2, 1, n + r, K));
      for (int i = 0; i + e < K; ++i) conv[i + e] += sg * f[i];
    }
    INFO("n=" << n);
    CHECK(oracle::matches(c3.beta(n, FracExp(K)), conv, 1));
  }
}

TEST_CASE("S1 gives the iterated alpha closed forms", "[bailey]") {
  const FracExp o(60);
  // S1(C1): alpha_{2n} = (-1)^n q^{7n^2} (q^n + q^{-n})
  const BaileyPair s = transform_S1(catalogue("C1"));
  for (long n = 1; n <= 2; ++n) {
    const int sg = n % 2 ? -1 : 1;
    CHECK(series_equal(s.alpha(2 * n, o), alpha_expect({{FracExp(7 * n * n + n), sg}, {FracExp(7 * n * n - n), sg}}, o)));
    CHECK(s.alpha(2 * n + 1, o).is_zero());
  }
  // two steps on C3: alpha_{2n} = (-1)^n q^{11n^2 + 5n}
  const BaileyPair t = transform_S1(transform_S1(catalogue("C3")));
  for (long n = 0; n <= 2; ++n)
    CHECK(series_equal(t.alpha(2 * n, o), alpha_expect({{FracExp(11 * n * n + 5 * n), n % 2 ? -1 : 1}}, o)));
}

TEST_CASE("shift of the starred C pairs lands on their unstarred partners", "[bailey]") {
  const FracExp o(30);
  // shift(C4*) has alpha_{2n} = (-1)^n q^{3n^2 + 3n}: it is C4's alpha
  const BaileyPair s4 = transform_shift(catalogue("C4*"));
  const BaileyPair c4 = catalogue("C4");
  CHECK(s4.a_exp() == FracExp(1));
  for (long n = 0; n <= 8; ++n) CHECK(series_equal(s4.alpha(n, o), c4.alpha(n, o)));
  // and beta'_n = q^n beta_n is C4's beta
  for (long n = 0; n <= 5; ++n) CHECK(series_equal(s4.beta(n, o), c4.beta(n, o)));

  const BaileyPair s7 = transform_shift(catalogue("C7*"));
  const BaileyPair c7 = catalogue("C7");
  for (long n = 0; n <= 8; ++n) CHECK(series_equal(s7.alpha(n, o), c7.alpha(n, o)));
  for (long n = 0; n <= 5; ++n) CHECK(series_equal(s7.beta(n, o), c7.beta(n, o)));
}

TEST_CASE("transforms preserve the pair property", "[bailey][closure]") {
  const FracExp o(30);
  for (const auto& tag : catalogue_tags()) {
    INFO(tag);
    const BaileyPair p = catalogue(tag);
    CHECK(verify_pair(transform_S1(p), 5, o).ok);
    if (FracExp(1) <= p.a_exp()) {
      CHECK(verify_pair(transform_shift(p), 5, o).ok);
    } else {
      CHECK_THROWS_AS(transform_shift(p), std::domain_error);
    }
  }
  // the unit pair and its S1 image
  for (FracExp a : {FracExp(0), FracExp(1), FracExp(2)}) {
    CHECK(verify_pair(unit_pair(a), 6, o).ok);
    CHECK(verify_pair(transform_S1(unit_pair(a)), 6, o).ok);
  }
}

TEST_CASE("S1 chain on C1 in the beta limit", "[bailey][limit]") {
  const FracExp o(30);
  const LimitResult lim = bailey_limit(transform_S1(catalogue("C1")), o, LimitMode::BetaLimit);
  REQUIRE(series_equal(lim.lhs, lim.rhs));
  CHECK(series_equal(lim.lhs, lim.rhs).checked_order == o);
  CHECK(lim.n_star > 0);
  // (q;q)_inf lim beta_n = (q^6, q^8, q^14; q^14)_inf / (q;q)_inf
  const Series qq = pochhammer_infinite(1, 1, 1, o);
  CHECK(oracle::matches((qq * lim.lhs).truncated(o), triple_over_qq(6, 8, 14, 30), 1));
}

TEST_CASE("W1 chain in the summed limit", "[bailey][limit]") {
  // r = 3: one S1 step, then sum q^{n^2} beta_n = (q^14, q^8, q^22; q^22)_inf / (q;q)_inf
  const FracExp o(30);
  const LimitResult lim = bailey_limit(transform_S1(catalogue("W1")), o, LimitMode::Summed);
  CHECK(series_equal(lim.lhs, lim.rhs));
  CHECK(oracle::matches(lim.lhs, triple_over_qq(14, 8, 22, 30), 1));
  CHECK(lim.terms >= 5);
}

TEST_CASE("unit pair limits", "[bailey][limit]") {
  const FracExp o(25);
  const Series qq = pochhammer_infinite(1, 1, 1, o);
  for (FracExp a : {FracExp(0), FracExp(1)}) {
    const LimitResult lim = bailey_limit(unit_pair(a), o, LimitMode::BetaLimit);
    CHECK(series_equal(lim.lhs, lim.rhs));
    const Series expect = invert(qq * pochhammer_infinite(a + FracExp(1), 1, 1, o));
    CHECK(series_equal(lim.lhs, expect));
  }
}

TEST_CASE("a divergent alpha side is reported", "[bailey][limit]") {
  const BaileyPair flat(
      FracExp(0), [](long, FracExp o) { return Series::one(max(o, FracExp(1))); },
      [](long, FracExp o) { return Series::one(max(o, FracExp(1))); }, "flat");
  CHECK_THROWS_AS(bailey_limit(flat, FracExp(10), LimitMode::BetaLimit), ConvergenceError);
}

TEST_CASE("derivation replays", "[bailey][replay]") {
  SECTION("worked cases") {
    const ReplayReport a = replay_derivation("2.1a", 3, 0, FracExp(40));
    CHECK(a.ok);
    CHECK(a.stages.size() == 6);
    for (const auto& s : a.stages) CHECK(s.result.checked_order >= FracExp(12));
    CHECK(a.pipeline == "C1 -> S1^2 -> beta limit");

    const ReplayReport b = replay_derivation("2.1b", 3, 1, FracExp(30));
    CHECK(b.ok);
    CHECK(b.pipeline == "C4* -> S1^1 -> shift -> S1^1 -> beta limit");

    const ReplayReport g = replay_derivation("2.2b", 2, 2, FracExp(30));
    CHECK(g.ok);
    CHECK(g.pipeline == "G4* -> S1^1 -> beta limit -> q^2");
  }
  SECTION("every family, small ranks") {
    for (const auto& [tag, lo] : std::vector<std::pair<std::string, int>>{
             {"2.1a", 2}, {"2.1b", 2}, {"2.1c", 2}, {"2.1d", 2}, {"2.2a", 2},
             {"2.2b", 2}, {"2.3a", 3}, {"2.3b", 3}, {"2.4a", 2}, {"2.4b", 2}}) {
      const bool takes_j = tag_takes_j(parse_tag(tag));
      for (int r = lo; r <= 4; ++r)
        for (int j = takes_j ? 1 : 0; j <= (takes_j ? r : 0); ++j) {
          INFO(tag << " r=" << r << " j=" << j);
          const ReplayReport rep = replay_derivation(tag, r, j, FracExp(20));
          CHECK(rep.ok);
          if (!rep.ok) WARN(rep.stages[*rep.failed_stage].name + ": " + rep.stages[*rep.failed_stage].result.str());
        }
    }
  }
  SECTION("a broken seed is caught at the first stage") {
    Pipeline p = pipeline_for("2.3b", 3, 0);
    p.seed = "W2-printed";
    const ReplayReport rep = replay_pipeline(p, "2.3b", 3, 0, FracExp(16));
    REQUIRE_FALSE(rep.ok);
    CHECK(rep.failed_stage == 0u);
  }
  SECTION("a wrong triple product is caught at the triple-product stage") {
    Pipeline p = pipeline_for("2.1a", 2, 0);
    p.jtp_z = FracExp(3);
    const ReplayReport rep = replay_pipeline(p, "2.1a", 2, 0, FracExp(16));
    REQUIRE_FALSE(rep.ok);
    CHECK(rep.failed_stage == 2u);
  }
  SECTION("ranges") {
    CHECK_THROWS(replay_derivation("2.3a", 2, 0, FracExp(10)));
    CHECK_THROWS(replay_derivation("2.1b", 3, 4, FracExp(10)));
    CHECK_THROWS(replay_derivation("2.9z", 3, 0, FracExp(10)));
  }
}
