#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include <nahmforge/modularity.hpp>

#include "oracle.hpp"

using namespace nahmforge;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

bool even_integer(const Rational& x) { return is_integer(x) && x.get_num() % 2 == 0; }

}  // namespace

TEST_CASE("second Bernoulli function", "[modularity]") {
  CHECK(p2(0) == R(1, 6));
  CHECK(p2(R(1, 2)) == R(-1, 12));
  CHECK(p2(R(5, 4)) == R(-1, 48));
  CHECK(p2(R(-3, 4)) == p2(R(1, 4)));
  for (long a = -20; a <= 20; ++a) CHECK(p2(R(a, 7)) == oracle::bernoulli2(R(a, 7)));
}

TEST_CASE("Robins analysis of the first quotient at r = 2", "[modularity]") {
  const RobinsReport rep = robins_analyze(build_proof_quotients("4.1-f1", 2, 0), 28);
  CHECK(rep.modular);
  CHECK(rep.w == 0);
  CHECK(rep.ord_zero == R(-3, 2));
  // (64r^2 - (64k+36)r + 16k^2 + 16k + 5)/(16r - 4) at r = 2, k = 3
  CHECK(rep.ord_inf == R(256 - 228 * 2 + 144 + 48 + 5, 28));
  CHECK(rep.t == 56);
  CHECK(rep.N0 == 4);
  CHECK(rep.level == 6272);
  CHECK(rep.level == 128 * 7 * 7);

  const nlohmann::json j = rep.to_json();
  CHECK(j["w"] == "0/1");
  CHECK(j["ord_zero"] == "-3/2");
  CHECK(j["ord_inf"] == "-3/28");
  CHECK(j["level"] == 6272);
  CHECK(j["modular"] == true);
}

TEST_CASE("Robins analysis edge cases", "[modularity]") {
  const RobinsReport empty = robins_analyze({}, 5);
  CHECK(empty.w == 0);
  CHECK(empty.ord_inf == 0);
  CHECK(empty.ord_zero == 0);
  CHECK(empty.t == 1);
  CHECK(empty.N0 == 1);
  CHECK(empty.level == 5);

  // w != 0 gives a verdict, not an error
  const RobinsReport eta1 = robins_analyze({{EtaFactor{{R(1), R(0)}, R(1)}}}, 1);
  CHECK_FALSE(eta1.modular);
  CHECK(eta1.w == 1);
  CHECK(eta1.ord_inf == R(1, 6));
  CHECK(eta1.t == 12);

  CHECK_THROWS_AS(robins_analyze({{EtaFactor{{R(3), R(1)}, R(1)}}}, 8), std::domain_error);
  CHECK_THROWS_AS(robins_analyze({}, 0), std::domain_error);
}

TEST_CASE("printed orders of the proof quotients", "[modularity]") {
  for (int r = 2; r <= 6; ++r)
    for (int j = 0; j <= r; ++j) {
      INFO("r=" << r << " j=" << j);
      const long k = quotient_k(Family::T1_1_1, r, j);
      const RobinsReport f1 = robins_analyze(build_proof_quotients("4.1-f1", r, j), 16 * r - 4);
      const RobinsReport f2 = robins_analyze(build_proof_quotients("4.1-f2", r, j), 16 * r - 4);
      CHECK(f1.w == 0);
      CHECK(f2.w == 0);
      CHECK(f1.ord_zero == R(1, 2) - r);
      CHECK(f2.ord_zero == R(1, 2) - r);
      CHECK(f1.ord_inf == R(64 * r * r - (64 * k + 36) * r + 16 * k * k + 16 * k + 5, 16 * r - 4));
      CHECK(f2.ord_inf == R((4 * r - 4 * k - 1) * (4 * r - 4 * k - 1), 16 * r - 4));

      const long kt = quotient_k(Family::T1_1_2, r, j);
      const RobinsReport g1 = robins_analyze(build_proof_quotients("4.2-g1", r, j), 16 * r - 12);
      const RobinsReport g2 = robins_analyze(build_proof_quotients("4.2-g2", r, j), 16 * r - 12);
      CHECK(g1.ord_zero == 1 - r);
      CHECK(g2.ord_zero == 1 - r);
      CHECK(g1.ord_inf == R(64 * r * r - (64 * kt + 100) * r + 16 * kt * kt + 48 * kt + 39, 4 * (4 * r - 3)));
      CHECK(g2.ord_inf == R((4 * r - 4 * kt - 3) * (4 * r - 4 * kt - 3), 4 * (4 * r - 3)));

      const RobinsReport s = robins_analyze(build_proof_quotients("4.3", r, j), 4 * r - 1);
      CHECK(s.w == 0);
      CHECK(s.ord_zero == R(5 - 4 * r, 8));
      CHECK(s.ord_inf == R(8 * r * r - 2 * (8 * k + 3) * r + 8 * k * k + 4 * k + 1, 16 * r - 4));

      const long k4 = quotient_k(Family::T1_3, r, j);
      const RobinsReport s4 = robins_analyze(build_proof_quotients("4.4", r, j), 4 * r - 3);
      CHECK(s4.ord_zero == R(7 - 4 * r, 8));
      CHECK(s4.ord_inf == R(4 * r * r - (8 * k4 + 7) * r + 4 * k4 * k4 + 6 * k4 + 3, 8 * r - 6));
    }
}

TEST_CASE("printed constants make every order an even integer", "[modularity]") {
  for (const std::string th : {"4.1", "4.2", "4.3", "4.4"})
    for (int r = 2; r <= 5; ++r) {
      const ProofConstants c = proof_constants(th, r);
      for (int j = 0; j <= r; ++j)
        for (const auto& label : theorem_quotients(th)) {
          INFO(label << " r=" << r << " j=" << j);
          const RobinsReport rep = robins_analyze(build_proof_quotients(label, r, j), c.N);
          CHECK(even_integer(Rational(rep.t) * rep.ord_inf));
          CHECK(even_integer(Rational(rep.N0) * rep.ord_zero));
          CHECK(even_integer(Rational(c.t) * rep.ord_inf));
          CHECK(even_integer(Rational(c.N0) * rep.ord_zero));
        }
    }
}

TEST_CASE("levels", "[modularity]") {
  for (int r = 2; r <= 5; ++r) {
    INFO("r=" << r);
    const long a = 4 * r - 1, b = 4 * r - 3;
    CHECK(proof_constants("4.1", r).level() == 128 * a * a);
    CHECK(proof_constants("4.2", r).level() == 128 * a * a);
    CHECK(proof_constants("4.3", r).level() == 64 * b * b);
    CHECK(proof_constants("4.4", r).level() == 64 * b * b);
    // the least family-wide constants divide the printed ones
    for (const std::string th : {"4.1", "4.2", "4.3", "4.4"}) {
      const ProofConstants least = family_constants(th, r), printed = proof_constants(th, r);
      CHECK(printed.t % least.t == 0);
      CHECK(printed.N0 % least.N0 == 0);
    }
  }
  // at r = 3 the two 64(4r-3)^2 families get by with half the level
  CHECK(family_constants("4.3", 3).level() == 2592);
  CHECK(family_constants("4.4", 3).level() == 2592);
}

TEST_CASE("analysis ignores factor order and merges duplicates", "[modularity]") {
  std::mt19937 rng(7);
  for (const auto& info : proof_quotients()) {
    const EtaQuotientSpec base = build_proof_quotients(info.label, 3, 1);
    const Integer N = info.family == Family::T1_1_1 ? 44 : info.family == Family::T1_1_2 ? 36
                      : info.family == Family::T1_2 ? 11 : 9;
    const RobinsReport ref = robins_analyze(base, N);
    EtaQuotientSpec shuffled = base;
    std::shuffle(shuffled.factors.begin(), shuffled.factors.end(), rng);
    const RobinsReport a = robins_analyze(shuffled, N);
    CHECK(a.to_json() == ref.to_json());
    // split every factor in two halves, then the analysis must not move
    EtaQuotientSpec split;
    for (const auto& f : base.factors) {
      split.factors.push_back({f.eta, f.exponent / 3});
      split.factors.push_back({f.eta, f.exponent * 2 / 3});
    }
    CHECK(robins_analyze(split, N).to_json() == ref.to_json());
  }
}

TEST_CASE("quotients against the Nahm sums", "[modularity][crosscheck]") {
  const FracExp o(20);
  CHECK(crosscheck_quotient_vs_nahm("4.1", 2, 0, o));
  CHECK(crosscheck_quotient_vs_nahm("4.2", 2, 2, o));
  CHECK(crosscheck_quotient_vs_nahm("4.3", 2, 2, o));
  CHECK(crosscheck_quotient_vs_nahm("4.4", 2, 1, o));
  for (const std::string th : {"4.1", "4.2", "4.3", "4.4"})
    for (int r = 2; r <= 3; ++r)
      for (int j = 0; j <= r; ++j) {
        INFO(th << " r=" << r << " j=" << j);
        const Comparison c = crosscheck_quotient_vs_nahm(th, r, j, o);
        CHECK(c);
        CHECK(c.checked_order == o);
      }
}

TEST_CASE("quotient shapes and ranges", "[modularity]") {
  const EtaQuotientSpec f2 = build_proof_quotients("4.1-f2", 2, 1);
  CHECK(f2.factors.size() == 8);
  CHECK(std::count_if(f2.factors.begin(), f2.factors.end(), [](const EtaFactor& f) { return f.exponent > 0; }) == 3);
  const EtaQuotientSpec s = build_proof_quotients("4.3", 2, 0);
  REQUIRE(s.factors.size() == 4);
  CHECK(s.factors[0].eta.delta == R(7, 2));
  CHECK(s.factors[0].eta.g == 3);
  CHECK(s.factors[2].eta.g == R(1, 2));
  CHECK(build_proof_quotients("4.4", 2, 1).factors[0].eta.delta == R(5, 2));
  CHECK_THROWS_AS(build_proof_quotients("4.1-f1", 1, 0), std::domain_error);
  CHECK_THROWS_AS(build_proof_quotients("4.1-f1", 3, 4), std::domain_error);
  CHECK_THROWS_AS(build_proof_quotients("4.9", 3, 0), std::invalid_argument);
}
