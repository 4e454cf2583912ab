#include <gtest/gtest.h>

#include "g2cert/catalog.hpp"
#include "g2cert/structures.hpp"

using namespace g2cert;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return make_rational(p, d); }

Form mono(int dim, std::initializer_list<int> idx, Rational c = Rational(1)) {
  return Form::monomial(dim, idx, c);
}

const Rational kMs[] = {q(-1), q(-2), q(-3)};

}  // namespace

TEST(StandardSU3, Forms) {
  const SU3Structure s = standard_su3();
  EXPECT_EQ(s.psi_plus, mono(6, {1, 2, 5}) - mono(6, {3, 4, 5}) + mono(6, {1, 3, 6}) + mono(6, {2, 4, 6}));
  EXPECT_EQ(s.psi_minus, mono(6, {1, 2, 6}) - mono(6, {3, 4, 6}) - mono(6, {1, 3, 5}) - mono(6, {2, 4, 5}));
  EXPECT_EQ(wedge(s.psi_plus, s.psi_minus), mono(6, {1, 2, 3, 4, 5, 6}, q(-4)));
  EXPECT_EQ(wedge(s.psi_plus, s.psi_minus), q(2, 3) * wedge(s.omega, s.omega, s.omega));
  EXPECT_TRUE(wedge(s.omega, s.psi_plus).is_zero());
}

TEST(StandardSU3, ComplexVolumeExpansion) {
  // Real and imaginary parts of (e1 + i e4)(e2 - i e3)(e5 + i e6), expanded by hand over pairs.
  const Form e1 = Form::basis(6, 1), e2 = Form::basis(6, 2), e3 = Form::basis(6, 3);
  const Form e4 = Form::basis(6, 4), e5 = Form::basis(6, 5), e6 = Form::basis(6, 6);
  const Form re = wedge(e1, e2, e5) + wedge(e1, e3, e6) - wedge(e4, e2, e6) + wedge(e4, e3, e5);
  const Form im = wedge(e1, e2, e6) - wedge(e1, e3, e5) + wedge(e4, e2, e5) + wedge(e4, e3, e6);
  EXPECT_EQ(standard_su3().psi_plus, re);
  EXPECT_EQ(standard_su3().psi_minus, im);
}

TEST(Compatibility, Residuals) {
  const SU3Structure s = standard_su3();
  auto [r1, r2] = compatibility_residuals(s);
  EXPECT_TRUE(r1.is_zero());
  EXPECT_EQ(r2, 0);
  auto [t1, t2] = compatibility_residuals(Form(q(2) * s.omega), s.psi_plus, s.psi_minus);
  EXPECT_TRUE(t1.is_zero());
  EXPECT_NE(t2, 0);
}

TEST(BuildG2, SevenTermPhiAndDual) {
  const G2Structure g = build_g2(standard_su3());
  const Form phi = mono(7, {1, 2, 5}) - mono(7, {3, 4, 5}) + mono(7, {5, 6, 7}) + mono(7, {1, 3, 6}) +
                   mono(7, {2, 4, 6}) - mono(7, {2, 3, 7}) + mono(7, {1, 4, 7});
  EXPECT_EQ(g.phi, phi);
  const SU3Structure s = standard_su3();
  const Form w = embed(s.omega, 7);
  EXPECT_EQ(g.star_phi, wedge(embed(s.psi_minus, 7), Form::basis(7, 7)) + q(1, 2) * wedge(w, w));
  EXPECT_EQ(wedge(g.phi, g.star_phi), q(7) * g.volume());
  EXPECT_EQ(g.orientation.sign, -1);
  // With the default orientation the dual flips sign.
  EXPECT_EQ(hodge(g.phi), -g.star_phi);
}

TEST(BuildG2, RejectsIncompatible) {
  SU3Structure s = standard_su3();
  s.omega = q(2) * s.omega;
  EXPECT_THROW(build_g2(s), StructureError);
}

TEST(HalfFlat, CatalogBases) {
  for (const auto& m : kMs) {
    for (Case c : kAllCases) {
      const HalfFlatReport r = is_half_flat(base_algebra(c, m), standard_su3());
      EXPECT_TRUE(r.half_flat) << label(c);
    }
  }
  const HalfFlatReport ab = is_half_flat(LieAlgebra::abelian(6), standard_su3());
  EXPECT_TRUE(ab.half_flat);
  EXPECT_TRUE(ab.d_psi_plus.is_zero());
  EXPECT_TRUE(ab.d_omega2.is_zero());
}

TEST(HalfFlat, H3PlusH3Fails) {
  const HalfFlatReport r = is_half_flat(h3_plus_h3(), standard_su3());
  EXPECT_FALSE(r.half_flat);
  EXPECT_EQ(r.d_psi_plus, mono(6, {1, 2, 3, 4}, q(-1)));
}

TEST(ConformallyParallel, CatalogAtThreeValues) {
  const G2Structure g = build_g2(standard_su3());
  for (const auto& m : kMs) {
    for (Case c : kAllCases) {
      const Extension ext = catalog_extension(c, m);
      auto [r1, r2] = conformally_parallel_residual(ext, g, m);
      EXPECT_TRUE(r1.is_zero()) << label(c) << ": " << to_string(r1);
      EXPECT_TRUE(r2.is_zero()) << label(c) << ": " << to_string(r2);
    }
  }
}

TEST(ConformallyParallel, WrongMFails) {
  const G2Structure g = build_g2(standard_su3());
  const Extension ext = catalog_extension(Case::H3, q(-1));
  auto [r1, r2] = conformally_parallel_residual(ext, g, q(-2));
  EXPECT_FALSE(r1.is_zero());
  EXPECT_FALSE(r2.is_zero());
}

TEST(ConformallyParallel, ImpliesHalfFlat) {
  const G2Structure g = build_g2(standard_su3());
  for (Case c : kAllCases) {
    const Extension ext = catalog_extension(c, q(-1));
    auto [r1, r2] = conformally_parallel_residual(ext, g, q(-1));
    if (r1.is_zero() && r2.is_zero()) {
      EXPECT_TRUE(is_half_flat(ext.base, standard_su3()).half_flat);
    }
  }
}

TEST(ConformallyParallel, RotatedStructuresFail) {
  for (const Rational& s : {q(1, 2), q(1, 3), q(2)}) {
    const SU3Structure rot = rotate(standard_su3(), s);
    const G2Structure g = build_g2(rot);
    for (Case c : kNonAbelianCases) {
      const Extension ext = catalog_extension(c, q(-1));
      auto [r1, r2] = conformally_parallel_residual(ext, g, q(-1));
      EXPECT_FALSE(r1.is_zero() && r2.is_zero()) << label(c);
    }
  }
}

TEST(ConformallyParallel, RescalingInvariance) {
  const G2Structure g = build_g2(standard_su3());
  for (const Rational& lambda : {q(2), q(1, 3), q(5, 7)}) {
    for (Case c : kAllCases) {
      const Extension ext = catalog_extension(c, q(-1));
      const LieAlgebra scaled = rescale(ext.algebra, lambda);
      auto [r1, r2] = conformally_parallel_residual(scaled, g, *scaled.m());
      EXPECT_TRUE(r1.is_zero() && r2.is_zero()) << label(c);
      const LieAlgebra base = rescale(ext.base, lambda);
      EXPECT_EQ(is_half_flat(base, standard_su3()).half_flat, true);
      EXPECT_EQ(is_symplectic(base, standard_su3().omega).symplectic, c == Case::Abelian);
    }
  }
}

TEST(Torsion, CatalogIdentities) {
  const G2Structure g = build_g2(standard_su3());
  for (const auto& m : kMs) {
    for (Case c : kAllCases) {
      const Extension ext = catalog_extension(c, m);
      const TorsionReport r = torsion_forms(ext, g);
      EXPECT_EQ(r.tau1, 0);
      EXPECT_EQ(r.tau4, m * Form::basis(7, 7)) << label(c);
      EXPECT_EQ(r.torsion, m * embed(standard_su3().psi_minus, 7)) << label(c);
      EXPECT_TRUE(r.residual_phi.is_zero());
      EXPECT_TRUE(r.residual_star_phi.is_zero());
    }
  }
}

TEST(Torsion, ProductCaseVanishes) {
  const G2Structure g = build_g2(standard_su3());
  const TorsionReport r = torsion_forms(LieAlgebra::abelian(7), g, q(0));
  EXPECT_EQ(r.tau1, 0);
  EXPECT_TRUE(r.tau4.is_zero());
  EXPECT_TRUE(r.torsion.is_zero());
}

TEST(Torsion, CalibrationIdentity) {
  const G2Structure g = build_g2(standard_su3());
  for (int k = 1; k <= 7; ++k) {
    const Form a = Form::basis(7, k);
    EXPECT_EQ(hodge(wedge(hodge(wedge(a, g.phi), g.orientation), g.phi), g.orientation), q(-4) * a);
  }
}

TEST(Symplectic, OnlyAbelian) {
  const Form w = standard_su3().omega;
  EXPECT_TRUE(is_symplectic(LieAlgebra::abelian(6), w).symplectic);
  for (Case c : kNonAbelianCases) EXPECT_FALSE(is_symplectic(base_algebra(c, q(-1)), w).symplectic) << label(c);
  const SymplecticReport r = is_symplectic(h3_plus_h3(), w);
  EXPECT_FALSE(r.symplectic);
  EXPECT_EQ(r.d_omega, mono(6, {1, 2, 6}) - mono(6, {3, 4, 5}));
}

TEST(E7Constraints, Values) {
  const auto ab = e7_component_constraints(catalog_extension(Case::Abelian, q(-1)), q(-1));
  for (const auto& k : ab) EXPECT_EQ(k, 0);
  for (const auto& m : kMs) {
    EXPECT_TRUE(some_constraint_vanishes(e7_component_constraints(catalog_extension(Case::H3, m), m)));
  }
  // Matches c1+c2+c3+c4+4m etc. on arbitrary eigenvalues.
  const std::vector<Rational> c = {q(-1, 7), q(-2, 9), q(-3, 11), q(-5, 13), q(-7, 17), q(-11, 19)};
  const Extension gen = rank_one_extension(LieAlgebra::abelian(6), c);
  const Rational m = q(-1);
  const auto k = e7_component_constraints(gen, m);
  EXPECT_EQ(k[0], c[0] + c[1] + c[2] + c[3] + 4 * m);
  EXPECT_EQ(k[1], c[1] + c[2] + c[4] + c[5] + 4 * m);
  EXPECT_EQ(k[2], -(c[0] + c[3] + c[4] + c[5] + 4 * m));
  EXPECT_FALSE(some_constraint_vanishes(k));
}
