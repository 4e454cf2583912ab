#pragma once

#include <array>
#include <utility>

#include "g2cert/liealg.hpp"

namespace g2cert {

template <class T>
struct BasicSU3 {
  BasicForm<T> omega;
  BasicForm<T> psi_plus;
  BasicForm<T> psi_minus;
};

using SU3Structure = BasicSU3<Rational>;

/// omega = e^{14} - e^{23} + e^{56}, psi+ + i psi- = (e^1 + i e^4)(e^2 - i e^3)(e^5 + i e^6).
inline SU3Structure standard_su3() {
  auto m = [](std::initializer_list<int> idx, int c = 1) { return Form::monomial(6, idx, Rational(c)); };
  SU3Structure s;
  s.omega = m({1, 4}) - m({2, 3}) + m({5, 6});
  s.psi_plus = m({1, 2, 5}) - m({3, 4, 5}) + m({1, 3, 6}) + m({2, 4, 6});
  s.psi_minus = m({1, 2, 6}) - m({3, 4, 6}) - m({1, 3, 5}) - m({2, 4, 5});
  return s;
}

/// (omega ^ psi+, coefficient of e^{1..6} in psi+ ^ psi- - 2/3 omega^3).
template <class T>
std::pair<BasicForm<T>, T> compatibility_residuals(const BasicForm<T>& omega, const BasicForm<T>& psi_plus,
                                                   const BasicForm<T>& psi_minus) {
  const BasicForm<T> first = wedge(omega, psi_plus);
  const BasicForm<T> cube = wedge(omega, omega, omega);
  const MultiIndex top = MultiIndex::from_bits(BasicForm<T>::full_mask(omega.dim()));
  const T two_thirds = CoefficientTraits<T>::from_rational(make_rational(2, 3));
  const T second = wedge(psi_plus, psi_minus).coefficient(top) - two_thirds * cube.coefficient(top);
  return {first, second};
}

template <class T>
std::pair<BasicForm<T>, T> compatibility_residuals(const BasicSU3<T>& s) {
  return compatibility_residuals(s.omega, s.psi_plus, s.psi_minus);
}

inline void check_su3(const SU3Structure& s) {
  if (s.omega.dim() != 6 || s.psi_plus.dim() != 6 || s.psi_minus.dim() != 6) {
    throw StructureError("SU(3) structure must live on R^6");
  }
  const auto [c1, c2] = compatibility_residuals(s);
  if (!c1.is_zero() || c2 != 0) throw StructureError("SU(3) compatibility relations violated");
  if (wedge(s.omega, s.omega, s.omega).is_zero()) throw StructureError("omega is degenerate");
}

/// Rotation psi+ -> cos psi+ + sin psi-, with (cos, sin) the rational point
/// ((1 - s^2)/(1 + s^2), 2s/(1 + s^2)) on the unit circle.
inline SU3Structure rotate(const SU3Structure& su3, const Rational& s) {
  const Rational den = 1 + s * s;
  const Rational c = (1 - s * s) / den;
  const Rational sn = 2 * s / den;
  return SU3Structure{su3.omega, c * su3.psi_plus + sn * su3.psi_minus, c * su3.psi_minus - sn * su3.psi_plus};
}

namespace detail {

/// Contraction of a form with the basis vector e_k.
inline Form contract_basis(int k, const Form& f) {
  Form out(f.dim(), f.is_homogeneous() && f.grade() > 0 ? f.grade() - 1 : Form::kMixed);
  for (const auto& [key, v] : f.terms()) {
    if (!key.contains(k)) continue;
    const int below = std::popcount(key.bits() & (MultiIndex::bit(k) - 1U));
    out.add_term(MultiIndex::from_bits(key.bits() & ~MultiIndex::bit(k)), below % 2 == 0 ? v : Rational(-v));
  }
  return out;
}

}  // namespace detail

/// The orientation induced by a positive 3-form: sign of (i_x phi)^2 ^ phi.
inline Orientation induced_orientation(const Form& phi) {
  if (phi.dim() != 7 || phi.grade() != 3) throw StructureError("expected a 3-form on R^7");
  for (int k = 1; k <= 7; ++k) {
    const Form ix = detail::contract_basis(k, phi);
    const Rational top = wedge(ix, ix, phi).coefficient(MultiIndex::from_bits(Form::full_mask(7)));
    if (top != 0) return Orientation{top > 0 ? 1 : -1};
  }
  throw StructureError("3-form is not stable");
}

struct G2Structure {
  SU3Structure su3;
  Form phi;
  Form star_phi;
  Orientation orientation;

  Form volume() const { return Form::volume(7, orientation); }
};

/// phi = omega ^ e^7 + psi+ and its dual psi- ^ e^7 + omega^2 / 2.
inline G2Structure build_g2(const SU3Structure& su3) {
  check_su3(su3);
  const Form e7 = Form::basis(7, 7);
  const Form w = embed(su3.omega, 7);
  G2Structure g;
  g.su3 = su3;
  g.phi = wedge(w, e7) + embed(su3.psi_plus, 7);
  g.orientation = induced_orientation(g.phi);
  g.star_phi = hodge(g.phi, g.orientation);
  const Form expected = wedge(embed(su3.psi_minus, 7), e7) + make_rational(1, 2) * wedge(w, w);
  if (g.star_phi != expected) throw StructureError("Hodge dual of phi disagrees with psi- ^ e7 + omega^2/2");
  return g;
}

struct HalfFlatReport {
  bool half_flat = false;
  Form d_psi_plus;
  Form d_omega2;
};

inline HalfFlatReport is_half_flat(const LieAlgebra& alg, const SU3Structure& su3) {
  if (alg.dim() != 6) throw DimensionError("half-flat check needs a 6-dimensional algebra");
  HalfFlatReport r;
  r.d_psi_plus = ce_differential(alg, su3.psi_plus);
  r.d_omega2 = ce_differential(alg, wedge(su3.omega, su3.omega));
  r.half_flat = r.d_psi_plus.is_zero() && r.d_omega2.is_zero();
  return r;
}

struct SymplecticReport {
  bool symplectic = false;
  Form d_omega;
};

inline SymplecticReport is_symplectic(const LieAlgebra& alg, const Form& omega) {
  if (alg.dim() != 6) throw DimensionError("symplectic check needs a 6-dimensional algebra");
  SymplecticReport r;
  r.d_omega = ce_differential(alg, omega);
  r.symplectic = r.d_omega.is_zero();
  return r;
}

/// (dphi - 3m e^7 ^ phi, d*phi - 4m e^7 ^ *phi).
inline std::pair<Form, Form> conformally_parallel_residual(const LieAlgebra& alg, const G2Structure& g2,
                                                           const Rational& m) {
  if (alg.dim() != 7) throw DimensionError("conformally parallel residual needs a 7-dimensional algebra");
  const Form e7 = Form::basis(7, 7);
  Form r1 = ce_differential(alg, g2.phi) - (3 * m) * wedge(e7, g2.phi);
  Form r2 = ce_differential(alg, g2.star_phi) - (4 * m) * wedge(e7, g2.star_phi);
  return {std::move(r1), std::move(r2)};
}

inline std::pair<Form, Form> conformally_parallel_residual(const Extension& ext, const G2Structure& g2,
                                                           const Rational& m) {
  return conformally_parallel_residual(ext.algebra, g2, m);
}

struct TorsionReport {
  Rational tau1;
  Form tau4;
  Form torsion;  // Phi
  Form residual_phi;
  Form residual_star_phi;
};

/// tau1 = <dphi, *phi>/7, tau4 = -(1/12) *(*dphi ^ phi),
/// Phi = 7/6 tau1 phi - *dphi + *(4 tau4 ^ phi).
/// The 1/12 is fixed by *(*(a ^ phi) ^ phi) = -4a for 1-forms a.
inline TorsionReport torsion_forms(const LieAlgebra& alg, const G2Structure& g2, const Rational& m) {
  const Orientation o = g2.orientation;
  const Form dphi = ce_differential(alg, g2.phi);
  TorsionReport r;
  r.tau1 = inner(dphi, g2.star_phi) / 7;
  r.tau4 = make_rational(-1, 12) * hodge(wedge(hodge(dphi, o), g2.phi), o);
  r.torsion = (make_rational(7, 6) * r.tau1) * g2.phi - hodge(dphi, o) + hodge(4 * wedge(r.tau4, g2.phi), o);
  std::tie(r.residual_phi, r.residual_star_phi) = conformally_parallel_residual(alg, g2, m);
  return r;
}

inline TorsionReport torsion_forms(const Extension& ext, const G2Structure& g2) {
  if (!ext.m()) throw std::invalid_argument("extension has no bound m");
  return torsion_forms(ext.algebra, g2, *ext.m());
}

/// Coefficients of e^{12347}, e^{23567}, e^{14567} in d*phi - 4m e^7 ^ *phi
/// with the psi- ^ e^7 part left out. These depend only on the c_j.
inline std::array<Rational, 3> e7_component_constraints(const Extension& ext, const Rational& m) {
  const Form e7 = Form::basis(7, 7);
  const SU3Structure s = standard_su3();
  const Form w = embed(s.omega, 7);
  const Form half_w2 = make_rational(1, 2) * wedge(w, w);
  const Form r = ce_differential(ext.algebra, half_w2) - (4 * m) * wedge(e7, half_w2);
  return {r.coefficient({1, 2, 3, 4, 7}), r.coefficient({2, 3, 5, 6, 7}), r.coefficient({1, 4, 5, 6, 7})};
}

inline bool some_constraint_vanishes(const std::array<Rational, 3>& k) {
  return k[0] == 0 || k[1] == 0 || k[2] == 0;
}

/// Expresses the algebra in the rescaled coframe f^i = lambda e^i.
inline LieAlgebra rescale(const LieAlgebra& alg, const Rational& lambda) {
  std::vector<Form> de;
  for (const auto& f : alg.differentials()) de.push_back(f * (1 / lambda));
  std::optional<Rational> m;
  if (alg.m()) m = *alg.m() / lambda;
  return LieAlgebra(alg.name(), std::move(de), std::move(m));
}

}  // namespace g2cert
