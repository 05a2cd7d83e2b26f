#pragma once

// JSON forms of the public types (nlohmann::json, found via ADL).
// Gram matrices are arrays of integer arrays; rationals are "num/den".

#include <string>
#include <vector>

#include <json.hpp>

#include "lenslat/changemaker.hpp"
#include "lenslat/d_invariants.hpp"
#include "lenslat/lattice_core.hpp"
#include "lenslat/linear_lattice.hpp"
#include "lenslat/surgery_diagrams.hpp"

namespace lenslat {

using json = nlohmann::json;

inline void to_json(json& j, const Rational& r) { j = r.str(); }
inline void from_json(const json& j, Rational& r) {
  if (j.is_number_integer()) {
    r = Rational(j.get<Int>());
    return;
  }
  r = Rational::parse(j.get<std::string>());
}

inline void to_json(json& j, const GramLattice& l) { j = l.gram(); }

inline void to_json(json& j, const Embedding& e) {
  j = json{{"domain", e.domain}, {"ambient_rank", e.ambient_rank}, {"images", e.images}};
}

inline void to_json(json& j, const Changemaker& cm) {
  j = json{{"sigma", cm.sigma()}, {"norm", cm.norm()}, {"rank", cm.rank()}};
}

inline void to_json(json& j, const CharDefect& d) {
  j = json{{"defect", d.defect}, {"witness", d.witness}, {"box", d.box}, {"box_binding", d.box_binding}};
}

inline void to_json(json& j, const TorsionProfile& t) {
  j = json{{"t", t.t}, {"g", t.g}, {"f", t.f ? json(*t.f) : json(nullptr)}};
}
inline void from_json(const json& j, TorsionProfile& t) {
  t.t = j.at("t").get<std::vector<Int>>();
  t.g = j.at("g").get<Int>();
  if (j.contains("f") && !j.at("f").is_null())
    t.f = j.at("f").get<Int>();
  else
    t.f.reset();
}

inline void to_json(json& j, const ContinuedFraction& cf) { j = cf.terms; }
inline void from_json(const json& j, ContinuedFraction& cf) { cf.terms = j.get<std::vector<Int>>(); }

inline void to_json(json& j, const LensSpace& l) { j = json{{"p", l.p}, {"q", l.q}}; }
inline void from_json(const json& j, LensSpace& l) { l = LensSpace(j.at("p").get<Int>(), j.at("q").get<Int>()); }

inline void to_json(json& j, const LensSum& s) { j = json{{"summands", s.summands}, {"m", s.m()}}; }
inline void from_json(const json& j, LensSum& s) { s.summands = j.at("summands").get<std::vector<LensSpace>>(); }

inline void to_json(json& j, const Realization& r) {
  j = json{{"outcome", r.witness ? "witness" : "none"},
           {"norm", r.norm},
           {"search_rank", r.search_rank},
           {"candidates_tested", r.candidates_tested},
           {"candidates_total", r.candidates_total}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  j["isometry"] = r.isometry ? json(*r.isometry) : json(nullptr);
}

inline void to_json(json& j, const CorrectionTable& t) { j = json{{"p", t.p}, {"values", t.values}}; }
inline void from_json(const json& j, CorrectionTable& t) {
  t.p = j.at("p").get<Int>();
  t.values = j.at("values").get<std::vector<Rational>>();
  if (static_cast<Int>(t.values.size()) != t.p) throw std::invalid_argument("correction table: length differs from p");
}

inline void to_json(json& j, const TorsionReport& r) { j = json{{"profile", r.profile}, {"violations", r.violations}}; }

inline void to_json(json& j, const Eq4Report& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"i", e.i}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"ok", e.ok}});
  j = json{{"passed", r.passed}, {"entries", entries}};
}

inline std::string to_string(Lemma9Report::Status s) {
  switch (s) {
    case Lemma9Report::Status::kPassed: return "passed";
    case Lemma9Report::Status::kFailed: return "failed";
    case Lemma9Report::Status::kSlopeMismatch: return "slope-mismatch";
  }
  return "?";
}

inline void to_json(json& j, const Lemma9Report& r) {
  json classes = json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"i", c.i},
                       {"bound", c.bound},
                       {"best", c.best},
                       {"witness", c.witness},
                       {"inequality", c.inequality},
                       {"equality", c.equality}});
  j = json{{"status", to_string(r.status)},
           {"p", r.p},
           {"box", r.box},
           {"covectors", r.covectors},
           {"equality_everywhere", r.equality_everywhere()},
           {"classes", classes}};
}

inline void to_json(json& j, const Slope& s) { j = s.str(); }

inline void to_json(json& j, const CanonicalSummands& s) {
  j = json{{"lens", s.lens}, {"s1xs2", s.s1xs2}, {"text", s.str()}};
}

inline void to_json(json& j, const Figure1Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  j = json{{"passed", r.passed()},
           {"h1_left", r.h1_left},
           {"h1_right", r.h1_right},
           {"transcript", r.transcript},
           {"checks", checks}};
  j["left_summands"] = r.left_summands ? json(*r.left_summands) : json(nullptr);
  j["right_summands"] = r.right_summands ? json(*r.right_summands) : json(nullptr);
}

}  // namespace lenslat
