#pragma once

// JSON forms of series and Nahm specs, and the builtin spec names.
//
//   series:    {"D": int, "order_num": int, "order_den": int, "terms": [[k, "n/d"], ...]}
//   NahmSpec:  {"r": int, "A": [["n/d", ...]], "b": [...], "c": "n/d", "d": [int, ...],
//               "sign_coord": int | null}

#include <regex>
#include <string>

#include <json.hpp>

#include "identities.hpp"
#include "nahm.hpp"
#include "series.hpp"

namespace nahmforge {

// "n" for integers, "n/d" otherwise
inline std::string rational_text(const Rational& x) { return x.get_str(); }

inline Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected a rational as \"num/den\" or an integer, got " + j.dump());
}

inline nlohmann::json series_to_json(const Series& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : s.terms()) terms.push_back({k, rational_text(c)});
  return {{"D", s.denom()}, {"order_num", s.order().num()}, {"order_den", s.order().den()}, {"terms", terms}};
}

inline Series series_from_json(const nlohmann::json& j) {
  const FracExp order(j.at("order_num").get<std::int64_t>(), j.at("order_den").get<std::int64_t>());
  std::vector<std::pair<std::int64_t, Rational>> items;
  for (const auto& t : j.at("terms")) items.emplace_back(t.at(0).get<std::int64_t>(), rational_from_json(t.at(1)));
  return Series::from_terms(j.at("D").get<std::int64_t>(), order, items);
}

inline nlohmann::json nahm_to_json(const NahmSpec& s) {
  nlohmann::json A = nlohmann::json::array(), b = nlohmann::json::array();
  for (const auto& row : s.A) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(rational_text(x));
    A.push_back(r);
  }
  for (const auto& x : s.b) b.push_back(rational_text(x));
  nlohmann::json out = {{"r", s.r}, {"A", A}, {"b", b}, {"c", rational_text(s.c)}, {"d", s.d}};
  out["sign_coord"] = s.sign_coord ? nlohmann::json(*s.sign_coord) : nlohmann::json(nullptr);
  return out;
}

inline NahmSpec nahm_from_json(const nlohmann::json& j) {
  NahmSpec s;
  s.r = j.at("r").get<int>();
  for (const auto& row : j.at("A")) {
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_from_json(x));
    s.A.push_back(r);
  }
  for (const auto& x : j.at("b")) s.b.push_back(rational_from_json(x));
  s.c = j.contains("c") ? rational_from_json(j.at("c")) : Rational(0);
  s.d = j.at("d").get<std::vector<int>>();
  if (j.contains("sign_coord") && !j.at("sign_coord").is_null()) s.sign_coord = j.at("sign_coord").get<int>();
  s.label = j.value("label", std::string("spec"));
  require_valid(s);
  return s;
}

// "capparelli", "T1.2:r=2:j=1", "wang:r=3:j=0", "SumC:r=3:first" / ":second"
inline NahmSpec builtin_spec(const std::string& name) {
  if (name == "capparelli" || name == "Capparelli") return build_capparelli();
  static const std::regex fam(R"(^(T1\.1-1|T1\.1-2|T1\.2|T1\.3|wang):r=(\d+):j=(\d+)$)");
  static const std::regex sumc(R"(^SumC:r=(\d+):(first|second)$)");
  std::smatch m;
  if (std::regex_match(name, m, fam)) {
    const int r = std::stoi(m[2]), j = std::stoi(m[3]);
    if (m[1] == "wang") return build_wang_sum(r, j);
    return build_family(parse_family(m[1]), r, j);
  }
  if (std::regex_match(name, m, sumc)) {
    const SumCPair p = build_sumC(std::stoi(m[1]));
    return m[2] == "first" ? p.first : p.second;
  }
  throw std::invalid_argument("unknown builtin '" + name +
                              "' (expected capparelli, <family>:r=R:j=J with family T1.1-1, T1.1-2, T1.2, T1.3 or "
                              "wang, or SumC:r=R:first|second)");
}

}  // namespace nahmforge
