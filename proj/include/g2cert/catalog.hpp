#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "g2cert/liealg.hpp"

namespace g2cert {

enum class Case { Abelian, H3, C12_34, C12_13_24, C12_13, Iwasawa, C12_13_23 };

inline constexpr std::array<Case, 7> kAllCases = {Case::Abelian, Case::H3,      Case::C12_34,   Case::C12_13_24,
                                                  Case::C12_13,  Case::Iwasawa, Case::C12_13_23};

inline constexpr std::array<Case, 6> kNonAbelianCases = {Case::H3,     Case::C12_34,  Case::C12_13_24,
                                                         Case::C12_13, Case::Iwasawa, Case::C12_13_23};

inline std::string_view label(Case c) {
  switch (c) {
    case Case::Abelian: return "abelian";
    case Case::H3: return "h3";
    case Case::C12_34: return "12+34";
    case Case::C12_13_24: return "12,13+24";
    case Case::C12_13: return "12,13";
    case Case::Iwasawa: return "iwasawa";
    case Case::C12_13_23: return "12,13,23";
  }
  return "?";
}

inline Case parse_case(std::string_view s) {
  for (Case c : kAllCases) {
    if (label(c) == s) return c;
  }
  if (s == "13+42,12+34") return Case::Iwasawa;
  if (s == "torus") return Case::Abelian;
  throw UnknownCaseError("unknown case: " + std::string(s));
}

enum class Holonomy { Trivial, SU2, SU3, G2 };

inline std::string_view holonomy_label(Holonomy h) {
  switch (h) {
    case Holonomy::Trivial: return "trivial (flat)";
    case Holonomy::SU2: return "SU(2)";
    case Holonomy::SU3: return "SU(3)";
    case Holonomy::G2: return "G2";
  }
  return "?";
}

inline int holonomy_dimension(Holonomy h) {
  switch (h) {
    case Holonomy::Trivial: return 0;
    case Holonomy::SU2: return 3;
    case Holonomy::SU3: return 8;
    case Holonomy::G2: return 14;
  }
  return -1;
}

inline Holonomy holonomy(Case c) {
  switch (c) {
    case Case::Abelian: return Holonomy::Trivial;
    case Case::H3: return Holonomy::SU2;
    case Case::C12_34: return Holonomy::SU3;
    case Case::C12_13: return Holonomy::SU3;
    case Case::C12_13_24:
    case Case::Iwasawa:
    case Case::C12_13_23: return Holonomy::G2;
  }
  return Holonomy::Trivial;
}

namespace detail {

/// de^gen += (num/den) * m * e^{ij}
struct MTerm {
  int gen;
  int i;
  int j;
  std::int64_t num;
  std::int64_t den;
};

inline std::vector<Form> assemble(int n, const std::vector<MTerm>& terms, const Rational& m) {
  std::vector<Form> de;
  for (int i = 0; i < n; ++i) de.emplace_back(n, 2);
  for (const auto& t : terms) {
    const int idx[] = {t.i, t.j};
    de[t.gen - 1] += Form::monomial(n, std::span<const int>(idx), make_rational(t.num, t.den) * m);
  }
  return de;
}

// Seven-dimensional structure equations, transcribed term by term.
inline std::vector<MTerm> displayed_terms(Case c) {
  switch (c) {
    case Case::Abelian:
      return {{1, 1, 7, -1, 1}, {2, 2, 7, -1, 1}, {3, 3, 7, -1, 1},
              {4, 4, 7, -1, 1}, {5, 5, 7, -1, 1}, {6, 6, 7, -1, 1}};
    case Case::H3:
      return {{1, 1, 7, -2, 3}, {2, 2, 7, -1, 1}, {3, 3, 7, -4, 3}, {3, 1, 5, 2, 3},
              {4, 4, 7, -1, 1}, {5, 5, 7, -2, 3}, {6, 6, 7, -1, 1}};
    case Case::C12_34:
      return {{1, 1, 7, -3, 4}, {2, 2, 7, -1, 1}, {3, 3, 7, -3, 2}, {3, 1, 5, 1, 2}, {3, 4, 6, -1, 2},
              {4, 4, 7, -3, 4}, {5, 5, 7, -3, 4}, {6, 6, 7, -3, 4}};
    case Case::C12_13_24:
      return {{1, 1, 7, -4, 5}, {2, 2, 7, -6, 5}, {2, 4, 5, -2, 5}, {3, 3, 7, -7, 5}, {3, 1, 5, 2, 5},
              {3, 4, 6, -2, 5}, {4, 4, 7, -3, 5}, {5, 5, 7, -3, 5}, {6, 6, 7, -4, 5}};
    case Case::C12_13:
      return {{1, 1, 7, -1, 1}, {2, 2, 7, -5, 4}, {2, 4, 5, -1, 2}, {3, 3, 7, -5, 4}, {3, 4, 6, -1, 2},
              {4, 4, 7, -1, 2}, {5, 5, 7, -3, 4}, {6, 6, 7, -3, 4}};
    case Case::Iwasawa:
      return {{1, 1, 7, -2, 3}, {2, 2, 7, -4, 3}, {2, 1, 6, -1, 3}, {2, 4, 5, -1, 3}, {3, 3, 7, -4, 3},
              {3, 1, 5, 1, 3},  {3, 4, 6, -1, 3}, {4, 4, 7, -2, 3}, {5, 5, 7, -2, 3}, {6, 6, 7, -2, 3}};
    case Case::C12_13_23:
      return {{1, 1, 7, -3, 5}, {2, 2, 7, -3, 5}, {3, 3, 7, -6, 5}, {3, 1, 5, 2, 5}, {4, 4, 7, -6, 5},
              {4, 2, 5, 2, 5},  {5, 5, 7, -3, 5}, {6, 6, 7, -6, 5}, {6, 1, 2, 2, 5}};
  }
  return {};
}

// Six-dimensional nilpotent bases in the adapted unitary basis.
inline std::vector<MTerm> base_terms(Case c) {
  switch (c) {
    case Case::Abelian: return {};
    case Case::H3: return {{3, 1, 5, 2, 3}};
    case Case::C12_34: return {{3, 1, 5, 1, 2}, {3, 4, 6, -1, 2}};
    case Case::C12_13_24: return {{2, 4, 5, -2, 5}, {3, 1, 5, 2, 5}, {3, 4, 6, -2, 5}};
    case Case::C12_13: return {{2, 4, 5, -1, 2}, {3, 4, 6, -1, 2}};
    case Case::Iwasawa: return {{2, 1, 6, -1, 3}, {2, 4, 5, -1, 3}, {3, 1, 5, 1, 3}, {3, 4, 6, -1, 3}};
    case Case::C12_13_23: return {{3, 1, 5, 2, 5}, {4, 2, 5, 2, 5}, {6, 1, 2, 2, 5}};
  }
  return {};
}

}  // namespace detail

/// c_j / m for j = 1..6.
inline std::vector<Rational> eigenvalue_ratios(Case c) {
  auto r = [](std::int64_t p, std::int64_t q) { return make_rational(p, q); };
  switch (c) {
    case Case::Abelian: return {r(-1, 1), r(-1, 1), r(-1, 1), r(-1, 1), r(-1, 1), r(-1, 1)};
    case Case::H3: return {r(-2, 3), r(-1, 1), r(-4, 3), r(-1, 1), r(-2, 3), r(-1, 1)};
    case Case::C12_34: return {r(-3, 4), r(-1, 1), r(-3, 2), r(-3, 4), r(-3, 4), r(-3, 4)};
    case Case::C12_13_24: return {r(-4, 5), r(-6, 5), r(-7, 5), r(-3, 5), r(-3, 5), r(-4, 5)};
    case Case::C12_13: return {r(-1, 1), r(-5, 4), r(-5, 4), r(-1, 2), r(-3, 4), r(-3, 4)};
    case Case::Iwasawa: return {r(-2, 3), r(-4, 3), r(-4, 3), r(-2, 3), r(-2, 3), r(-2, 3)};
    case Case::C12_13_23: return {r(-3, 5), r(-3, 5), r(-6, 5), r(-6, 5), r(-3, 5), r(-6, 5)};
  }
  return {};
}

/// The seven-dimensional algebra term by term, as listed (not rebuilt from c).
inline LieAlgebra displayed_extension(Case c, const Rational& m) {
  return LieAlgebra(std::string(label(c)), detail::assemble(7, detail::displayed_terms(c), m), m);
}

inline LieAlgebra base_algebra(Case c, const Rational& m) {
  return LieAlgebra(std::string(label(c)), detail::assemble(6, detail::base_terms(c), m), m);
}

/// Built from (base, c) by rank_one_extension; must equal displayed_extension.
inline Extension catalog_extension(Case c, const Rational& m) {
  std::vector<Rational> ev;
  for (const auto& r : eigenvalue_ratios(c)) ev.push_back(r * m);
  return rank_one_extension(base_algebra(c, m), std::move(ev), std::string(label(c)));
}

/// Representative of the isomorphism class of the nilpotent base, in the
/// usual (de^1, ..., de^6) notation.
inline LieAlgebra normal_form(Case c) {
  auto pair = [](int i, int j) { return Form::monomial(6, {i, j}); };
  std::vector<Form> de(6, Form(6, 2));
  switch (c) {
    case Case::Abelian: break;
    case Case::H3: de[5] = pair(1, 2); break;
    case Case::C12_34: de[5] = pair(1, 2) + pair(3, 4); break;
    case Case::C12_13_24:
      de[4] = pair(1, 2);
      de[5] = pair(1, 3) + pair(2, 4);
      break;
    case Case::C12_13:
      de[4] = pair(1, 2);
      de[5] = pair(1, 3);
      break;
    case Case::Iwasawa:
      de[4] = pair(1, 3) + pair(4, 2);
      de[5] = pair(1, 2) + pair(3, 4);
      break;
    case Case::C12_13_23:
      de[3] = pair(1, 2);
      de[4] = pair(1, 3);
      de[5] = pair(2, 3);
      break;
  }
  return LieAlgebra(std::string(label(c)), std::move(de));
}

/// (0,0,0,0,e^{12},e^{34}); carries no conformally parallel structure.
inline LieAlgebra h3_plus_h3() {
  std::vector<Form> de(6, Form(6, 2));
  de[4] = Form::monomial(6, {1, 2});
  de[5] = Form::monomial(6, {3, 4});
  return LieAlgebra("h3+h3", std::move(de));
}

}  // namespace g2cert
