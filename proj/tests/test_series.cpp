#include <catch_amalgamated.hpp>

#include <random>

#include <nahmforge/series.hpp>

#include "oracle.hpp"

using namespace nahmforge;

namespace {

Series poly(std::initializer_list<std::pair<FracExp, long>> terms, FracExp order) {
  Series s(order);
  for (auto [e, c] : terms) s = s + Series::monomial(e, c, order);
  return s;
}

Series random_series(std::mt19937& rng, FracExp order) {
  std::uniform_int_distribution<int> dden(1, 8), nterms(0, 6), coef(-5, 5), cden(1, 3);
  const int D = dden(rng);
  const std::int64_t K = order.ceil_scaled(D);
  std::uniform_int_distribution<std::int64_t> pos(0, K - 1);
  std::vector<std::pair<std::int64_t, Rational>> items;
  for (int i = nterms(rng); i > 0; --i) items.emplace_back(pos(rng), make_rational(coef(rng), cden(rng)));
  return Series::from_terms(D, order, items);
}

}  // namespace

TEST_CASE("monomials") {
  Series one = Series::monomial(0, 1, 10);
  CHECK(one.size() == 1);
  CHECK(one.coeff(0) == 1);
  CHECK(one.order() == FracExp(10));

  Series h = Series::monomial(FracExp(1, 2), 1, 5);
  CHECK(h.coeff(FracExp(1, 2)) == 1);
  CHECK(h.denom() == 2);

  // prefactor of eta_{4,1}: (4/2) * P2(1/4)
  const Rational pref = Rational(2) * oracle::bernoulli2(make_rational(1, 4));
  CHECK(pref == make_rational(-1, 24));
  Series m = Series::monomial(FracExp(pref), 1, 3);
  CHECK(m.denom() == 24);
  CHECK(*m.valuation() == FracExp(-1, 24));

  CHECK_THROWS_AS(Series::monomial(5, 1, 5), EmptySeriesError);
  CHECK_THROWS_AS(Series::monomial(FracExp(11, 2), 1, 5), EmptySeriesError);
}

TEST_CASE("add, mul, neg") {
  const FracExp O(10);
  Series a = poly({{0, 1}, {FracExp(1, 2), 1}}, O);
  Series b = poly({{0, 1}, {FracExp(1, 2), -1}}, O);
  CHECK(series_equal(a * b, poly({{0, 1}, {1, -1}}, O)));

  CHECK(series_equal(poly({{0, 1}, {1, -1}}, O) + poly({{1, 1}}, O), Series::one(O)));
  CHECK((poly({{0, 1}, {1, -1}}, O) + poly({{1, 1}}, O)).size() == 1);

  // (1 - q - q^2 + q^3) = (1 - q)(1 - q^2), so the geometric series cancels
  // the first factor: coefficients 1, 1-1, 1-1-1, 1-1-1+1 = 1, 0, -1, 0.
  Series p = poly({{0, 1}, {1, -1}, {2, -1}, {3, 1}}, 4);
  Series geo = poly({{0, 1}, {1, 1}, {2, 1}, {3, 1}}, 4);
  Series prod = p * geo;
  CHECK(prod.order() == FracExp(4));
  CHECK(series_equal(prod, poly({{0, 1}, {2, -1}}, 4)));
  oracle::Poly hand = oracle::mul({1, -1, -1, 1}, {1, 1, 1, 1});
  CHECK(oracle::matches(prod, hand, 1));

  CHECK(series_equal(-a + a, Series(O)));
  CHECK(neg(a).coeff(FracExp(1, 2)) == -1);

  // order is the minimum of the operands
  CHECK((Series::one(7) * Series::one(FracExp(9, 2))).order() == FracExp(9, 2));
  CHECK((Series::one(7) + Series::one(3)).order() == FracExp(3));
}

TEST_CASE("invert") {
  Series geo = invert(poly({{0, 1}, {1, -1}}, 12));
  for (int k = 0; k < 12; ++k) CHECK(geo.coeff(k) == 1);
  CHECK(series_equal(invert(Series::one(6)), Series::one(6)));

  // 1/((q;q)_2): partitions into parts of size at most 2
  Series inv = invert(poly({{0, 1}, {1, -1}, {2, -1}, {3, 1}}, 5));
  for (int n = 0; n < 5; ++n)
    CHECK(inv.coeff(n) == oracle::count_partitions(n, [](int p) { return p <= 2; }, -1));
  CHECK(inv.coeff(4) == 3);

  Series shifted = poly({{FracExp(1, 3), 2}, {1, 1}}, 8);
  Series s = invert(shifted);
  CHECK(*s.valuation() == FracExp(-1, 3));
  CHECK(s.coeff(FracExp(-1, 3)) == make_rational(1, 2));
  CHECK(series_equal(shifted * s, Series::one(8)).equal);

  CHECK_THROWS_AS(invert(Series(5)), NonInvertibleError);
}

TEST_CASE("finite Pochhammer") {
  CHECK(series_equal(pochhammer_finite(1, 1, 1, 0, 10), Series::one(10)));
  CHECK(series_equal(pochhammer_finite(1, 1, 1, 2, 10), poly({{0, 1}, {1, -1}, {2, -1}, {3, 1}}, 10)));
  CHECK(series_equal(pochhammer_finite(FracExp(1, 2), -1, 1, 1, 10), poly({{0, 1}, {FracExp(1, 2), 1}}, 10)));

  // (q^{-1}; q)_3 = (1 - q^{-1})(1 - 1)(1 - q) = 0
  CHECK(pochhammer_finite(-1, 1, 1, 3, 10).is_zero());
  // (-q^{-1}; q)_2 = (1 + q^{-1})(1 + 1)
  CHECK(series_equal(pochhammer_finite(-1, -1, 1, 2, 10), poly({{-1, 2}, {0, 2}}, 10)));
}

TEST_CASE("infinite Pochhammer") {
  Series euler = pochhammer_infinite(1, 1, 1, 8);
  CHECK(series_equal(euler, poly({{0, 1}, {1, -1}, {2, -1}, {5, 1}, {7, 1}}, 8)));

  // brute-force expansion of the first 30 factors
  oracle::Poly p = oracle::one(30);
  for (int i = 1; i < 30; ++i) p = oracle::times_binomial(p, i, -1);
  CHECK(oracle::matches(pochhammer_infinite(1, 1, 1, 30), p, 1));

  CHECK(series_equal(pochhammer_infinite(100, 1, 1, 10), Series::one(10)));

  // (-q; q^2)_inf counts partitions into distinct odd parts
  Series odd = pochhammer_infinite(1, -1, 2, 40);
  for (int n = 0; n < 40; ++n)
    CHECK(odd.coeff(n) == oracle::count_partitions(n, [](int k) { return k % 2 == 1; }, 1));

  // (q^{1/2}; q^{1/2})_inf is (q;q)_inf with q -> q^{1/2}
  CHECK(series_equal(pochhammer_infinite(FracExp(1, 2), 1, FracExp(1, 2), 10),
                     pochhammer_infinite(1, 1, 1, 20).dilated(FracExp(1, 2))));

  // (q; -q^2)_inf = (1 - q)(1 + q^3)(1 - q^5)...
  oracle::Poly a = oracle::one(30);
  for (int n = 0; 1 + 2 * n < 30; ++n) a = oracle::times_binomial(a, 1 + 2 * n, n % 2 == 0 ? -1 : 1);
  CHECK(oracle::matches(alt_pochhammer_infinite(1, 1, 2, 30), a, 1));

  CHECK_THROWS_AS(pochhammer_infinite(0, 1, 1, 10), DivergentProductError);
  CHECK_THROWS_AS(pochhammer_infinite(-1, 1, 1, 10), DivergentProductError);
}

TEST_CASE("series_equal reports the first mismatch") {
  Series a = poly({{0, 1}, {1, 1}}, 10);
  Series b = poly({{0, 1}, {1, -1}}, 10);
  CHECK(series_equal(a, a).equal);
  Comparison c = series_equal(a, b);
  REQUIRE_FALSE(c.equal);
  CHECK(c.mismatch->exponent == FracExp(1));
  CHECK(c.mismatch->lhs == 1);
  CHECK(c.mismatch->rhs == -1);
  // only exponents below the smaller order are compared
  CHECK(series_equal(poly({{0, 1}, {5, 1}}, 10), poly({{0, 1}}, 5)).equal);
}

TEST_CASE("Euler's identity with z = q") {
  const FracExp O(40);
  Series lhs(O);
  for (int n = 0; n * (n - 1) / 2 + n < 40; ++n)
    lhs += invert(pochhammer_finite(1, 1, 1, n, O)).shifted(n * (n - 1) / 2 + n).truncated(O);
  CHECK(series_equal(lhs, pochhammer_infinite(1, -1, 1, O)));
}

TEST_CASE("ring axioms on random sparse series") {
  std::mt19937 rng(20240611);
  const FracExp O(20);
  for (int trial = 0; trial < 120; ++trial) {
    Series a = random_series(rng, O), b = random_series(rng, O), c = random_series(rng, O);
    REQUIRE(series_equal(a + b, b + a));
    REQUIRE(series_equal(a * b, b * a));
    REQUIRE(series_equal((a + b) + c, a + (b + c)));
    REQUIRE(series_equal((a * b) * c, a * (b * c)));
    REQUIRE(series_equal(a * (b + c), a * b + a * c));
    REQUIRE(series_equal(a + Series(O), a));
    REQUIRE(series_equal(a * Series::one(O), a));
    REQUIRE(series_equal(a - a, Series(O)));
  }
}

TEST_CASE("truncation coherence") {
  std::mt19937 rng(7);
  const FracExp O(20);
  for (int trial = 0; trial < 60; ++trial) {
    Series a = random_series(rng, O), b = random_series(rng, O);
    for (FracExp cut : {FracExp(1), FracExp(5, 2), FracExp(7), FracExp(31, 3), FracExp(20)}) {
      Series lhs = (a * b).truncated(cut);
      Series rhs = a.truncated(cut) * b.truncated(cut);
      REQUIRE(lhs.order() == rhs.order());
      REQUIRE(series_equal(lhs, rhs));
    }
  }
}

TEST_CASE("Pochhammer telescoping") {
  const FracExp O(40);
  const std::vector<std::tuple<FracExp, int, FracExp>> bases = {
      {1, 1, 1}, {FracExp(1, 2), -1, 1}, {2, 1, 3}, {FracExp(3, 4), 1, FracExp(1, 2)}, {5, -1, 2}};
  for (const auto& [e, s, t] : bases) {
    const Series full = pochhammer_infinite(e, s, t, O);
    for (int n = 0; n <= 10; ++n) {
      Series lhs = pochhammer_finite(e, s, t, n, O) * pochhammer_infinite(e + FracExp(n) * t, s, t, O);
      REQUIRE(series_equal(lhs, full));
    }
  }
}

TEST_CASE("invert is a two-sided inverse") {
  std::mt19937 rng(99);
  const FracExp O(20);
  int checked = 0;
  while (checked < 100) {
    Series a = random_series(rng, O);
    if (a.is_zero() || a.valuation()->num() != 0) a = a + Series::one(O);
    if (a.is_zero() || !(a.valuation() == FracExp(0))) continue;
    Series b = invert(a);
    REQUIRE(series_equal(a * b, Series::one(O)));
    REQUIRE(series_equal(b * a, Series::one(O)));
    REQUIRE(series_equal(invert(b), a));
    ++checked;
  }
}

TEST_CASE("square root of a unit series") {
  const FracExp O(30);
  Series e = pochhammer_infinite(1, 1, 1, O);
  CHECK(series_equal(sqrt_unit(e * e), e));
  Series h = pochhammer_infinite(FracExp(1, 2), -1, 1, O);
  CHECK(series_equal(sqrt_unit(h * h), h));
  CHECK_THROWS(sqrt_unit(Series::monomial(1, 1, O)));
  CHECK_THROWS(sqrt_unit(Series::constant(4, O)));
}

TEST_CASE("power, dilation and text form") {
  const FracExp O(12);
  Series e = pochhammer_infinite(1, 1, 1, O);
  CHECK(series_equal(pow(e, 3), e * e * e));
  CHECK(series_equal(pow(e, -2), invert(e * e)));
  CHECK(series_equal(pochhammer_infinite(1, 1, 1, 6).dilated(2), pochhammer_infinite(2, 1, 2, 12)));
  CHECK(poly({{0, 1}, {FracExp(1, 2), -2}, {3, 1}}, 5).str() == "1 - 2*q^(1/2) + q^3 + O(q^5)");
  CHECK(Series(3).str() == "0 + O(q^3)");
  CHECK(poly({{1, -1}}, 2).str() == "-q + O(q^2)");
}
