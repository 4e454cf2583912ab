#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "g2cert/catalog.hpp"
#include "g2cert/structures.hpp"

namespace g2cert {

using Json = nlohmann::ordered_json;

/// Integers that fit in int64 are written as JSON numbers, larger ones as
/// decimal strings.
inline Json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

inline BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw std::invalid_argument("expected an integer");
}

inline Json rational_json(const Rational& r) {
  return Json{{"num", bigint_json(numerator_of(r))}, {"den", bigint_json(denominator_of(r))}};
}

inline Rational rational_from_json(const Json& j) {
  const BigInt den = bigint_from_json(j.at("den"));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(bigint_from_json(j.at("num")), den);
}

/// {"grade": k, "terms": [{"idx": [...], "num": p, "den": q}, ...]}, terms in
/// lexicographic order of idx.
inline Json form_json(const Form& f) {
  if (!f.is_homogeneous()) throw GradeError("only homogeneous forms serialize");
  Json terms = Json::array();
  for (const auto& [key, c] : f.terms()) {
    terms.push_back(Json{{"idx", key.indices()},
                         {"num", bigint_json(numerator_of(c))},
                         {"den", bigint_json(denominator_of(c))}});
  }
  return Json{{"grade", f.grade()}, {"terms", std::move(terms)}};
}

/// dim <= 0 infers the smallest ambient dimension holding every index.
inline Form form_from_json(const Json& j, int dim = 0) {
  const int grade = j.at("grade").get<int>();
  if (grade < 0) throw GradeError("negative grade");
  std::vector<std::pair<MultiIndex, Rational>> terms;
  int needed = grade;
  for (const auto& t : j.at("terms")) {
    const auto idx = t.at("idx").get<std::vector<int>>();
    if (static_cast<int>(idx.size()) != grade) throw GradeError("term grade differs from form grade");
    const MultiIndex key{std::span<const int>(idx)};
    needed = std::max(needed, key.max_index());
    terms.emplace_back(key, rational_from_json(t));
  }
  if (dim <= 0) dim = needed;
  if (dim < needed) throw DimensionError("index exceeds the requested dimension");
  Form f(dim, grade);
  for (const auto& [key, c] : terms) f.add_term(key, c);
  return f;
}

inline Json catalog_row_json(Case c, const Rational& m) {
  const Extension ext = catalog_extension(c, m);
  Json de = Json::array();
  for (const auto& f : ext.algebra.differentials()) de.push_back(form_json(f));
  Json ev = Json::array();
  for (const auto& [r, mult] : eigenvalue_type(ext)) {
    ev.push_back(Json{{"ratio", {bigint_json(numerator_of(r)), bigint_json(denominator_of(r))}},
                      {"multiplicity", mult}});
  }
  const Holonomy h = holonomy(c);
  return Json{{"name", std::string(label(c))},
              {"m", to_string(m)},
              {"differentials", std::move(de)},
              {"eigenvalues", std::move(ev)},
              {"holonomy", std::string(holonomy_label(h))},
              {"holonomy_dimension", holonomy_dimension(h)}};
}

inline Json catalog_json(const Rational& m) {
  Json rows = Json::array();
  for (Case c : kAllCases) rows.push_back(catalog_row_json(c, m));
  return rows;
}

/// One line per algebra: name, de^1..de^7, eigenvalue type in units of m,
/// holonomy.
inline std::string catalog_table(const Rational& m) {
  std::string out;
  for (Case c : kAllCases) {
    const Extension ext = catalog_extension(c, m);
    out += std::string(label(c)) + "\n  d:";
    int i = 1;
    for (const auto& f : ext.algebra.differentials()) {
      out += (i == 1 ? " " : "; ") + std::string("de") + std::to_string(i) + " = " + to_string(f);
      ++i;
    }
    out += "\n  eigenvalues:";
    bool first = true;
    for (const auto& [r, mult] : eigenvalue_type(ext)) {
      out += (first ? " " : ", ") + std::string("(") + to_string(r) + ")m x" + std::to_string(mult);
      first = false;
    }
    out += "\n  holonomy: " + std::string(holonomy_label(holonomy(c))) + "\n";
  }
  return out;
}

inline Json torsion_json(const TorsionReport& r) {
  return Json{{"tau1", rational_json(r.tau1)},
              {"tau4", form_json(r.tau4)},
              {"torsion", form_json(r.torsion)},
              {"residual_phi", form_json(r.residual_phi)},
              {"residual_star_phi", form_json(r.residual_star_phi)}};
}

}  // namespace g2cert
