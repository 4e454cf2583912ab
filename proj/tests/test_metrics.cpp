#include <gtest/gtest.h>

#include <cmath>

#include "g2cert/metrics.hpp"
#include "g2cert/structures.hpp"

using namespace g2cert;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return make_rational(p, d); }

const std::vector<Point>& points20() {
  static const std::vector<Point> pts = sample_points(20240607, 20);
  return pts;
}

Point shifted(Point p, int i, double h) {
  p[i] += h;
  return p;
}

const Form& phi() {
  static const Form f = build_g2(standard_su3()).phi;
  return f;
}

}  // namespace

TEST(Chart, StructureEquationsHoldExactly) {
  for (const Rational& m : {q(-1), q(-2), q(1, 3)}) {
    for (Case c : kAllCases) {
      const Chart ch = make_chart(c, m);
      const auto defects = structure_equation_defects(ch, displayed_extension(c, m));
      for (std::size_t a = 0; a < defects.size(); ++a) EXPECT_TRUE(defects[a].is_zero()) << label(c) << " e" << a + 1;
    }
  }
}

TEST(Chart, MatchesDisplayedMetric) {
  for (const Rational& m : {q(-1), q(-3)}) {
    for (Case c : kAllCases) {
      const Chart ch = make_chart(c, m);
      const ExprMatrix disp = displayed_metric(c, m);
      for (int i = 0; i < kCoords; ++i) {
        for (int j = 0; j < kCoords; ++j) EXPECT_EQ(ch.metric[i][j], disp[i][j]) << label(c) << " " << i << j;
      }
      const auto pts = sample_points(99, 10);
      for (const auto& p : pts) EXPECT_LE(max_abs(Mat7(evaluate(ch.metric, p) - evaluate(disp, p))), 1e-12);
    }
  }
}

TEST(Chart, FlatAndOriginValues) {
  const Chart ab = make_chart(Case::Abelian, q(-1));
  const Point p = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.3};
  const Mat7 g = evaluate(ab.metric, p);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(g(i, i), 1.0, 1e-15);
  EXPECT_NEAR(g(6, 6), std::exp(0.6), 1e-14);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-15);

  const Mat7 h = evaluate(make_chart(Case::H3, q(-1)).metric, Point{});
  Mat7 expected = Mat7::Identity();
  expected(2, 2) = 4.0 / 9.0;
  EXPECT_LE(max_abs(Mat7(h - expected)), 1e-15);
}

TEST(Chart, IwasawaCoframe) {
  const Rational m = q(-1);
  const Chart ch = make_chart(Case::Iwasawa, m);
  const Expr pref = Expr(m / 3) * Expr::exp_t(make_rational(4, 3) * m);
  EXPECT_EQ(ch.coframe[1][1], pref * Expr(2));
  EXPECT_EQ(ch.coframe[1][0], pref * Expr::x(6));
  EXPECT_EQ(ch.coframe[1][4], -(pref * Expr::x(4)));
}

TEST(Chart, RejectsZeroM) { EXPECT_THROW(make_chart(Case::H3, q(0)), std::invalid_argument); }

TEST(Christoffel, FlatChartOnlyTimeBlock) {
  const ChartGeometry geo(make_chart(Case::Abelian, q(-1)));
  const Christoffel G = geo.christoffels(points20()[0]);
  for (int k = 0; k < kCoords; ++k) {
    for (int i = 0; i < kCoords; ++i) {
      for (int j = 0; j < kCoords; ++j) {
        const double expected = (k == kT && i == kT && j == kT) ? 1.0 : 0.0;
        EXPECT_NEAR(G[idx3(k, i, j)], expected, 1e-14);
      }
    }
  }
}

TEST(Christoffel, SymmetricAndMetricCompatible) {
  for (Case c : kAllCases) {
    const ChartGeometry geo(make_chart(c, q(-1)));
    for (int n = 0; n < 3; ++n) {
      const Point& p = points20()[n];
      const Christoffel G = geo.christoffels(p);
      for (int k = 0; k < kCoords; ++k) {
        for (int i = 0; i < kCoords; ++i) {
          for (int j = 0; j < kCoords; ++j) EXPECT_EQ(G[idx3(k, i, j)], G[idx3(k, j, i)]);
        }
      }
      EXPECT_LE(metricity_residual(geo, p), 1e-10) << label(c);
    }
  }
}

TEST(Christoffel, MatchesFiniteDifferences) {
  const ChartGeometry geo(make_chart(Case::H3, q(-1)));
  const Point& p = points20()[3];
  const double h = 1e-5;
  std::array<Mat7, kCoords> dg;
  for (int a = 0; a < kCoords; ++a) {
    dg[a] = (geo.metric(shifted(p, a, h)) - geo.metric(shifted(p, a, -h))) / (2 * h);
  }
  const Mat7 gi = geo.metric(p).inverse();
  const Christoffel G = geo.christoffels(p);
  for (int k = 0; k < kCoords; ++k) {
    for (int i = 0; i < kCoords; ++i) {
      for (int j = 0; j < kCoords; ++j) {
        double v = 0.0;
        for (int l = 0; l < kCoords; ++l) v += 0.5 * gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        EXPECT_NEAR(G[idx3(k, i, j)], v, 1e-6);
      }
    }
  }
}

TEST(Jet2Engine, SecondPartialsAgreeWithSymbolicAndFiniteDifferences) {
  const auto pts = sample_points(7, 10);
  const double h = 1e-4;
  for (Case c : kAllCases) {
    const Chart ch = make_chart(c, q(-1));
    const ChartGeometry geo(ch);
    for (const auto& p : pts) {
      for (int a = 0; a < kCoords; ++a) {
        for (int b = a; b < kCoords; ++b) {
          const auto jet = metric_jet(ch, p, a, b);
          const Mat7 fd = (geo.metric(shifted(shifted(p, a, h), b, h)) - geo.metric(shifted(shifted(p, a, h), b, -h)) -
                           geo.metric(shifted(shifted(p, a, -h), b, h)) + geo.metric(shifted(shifted(p, a, -h), b, -h))) /
                          (4 * h * h);
          for (int i = 0; i < kCoords; ++i) {
            for (int j = 0; j < kCoords; ++j) {
              const double sym = geo.metric_d2(a, b, i, j, p);
              const double scale = std::max(1.0, std::abs(sym));
              EXPECT_NEAR(jet[i][j].ab, sym, 1e-12 * scale);
              EXPECT_NEAR(jet[i][j].ab, fd(i, j), 1e-6 * scale) << label(c);
            }
          }
        }
      }
    }
  }
}

TEST(Riemann, AlgebraicSymmetries) {
  for (Case c : kAllCases) {
    const ChartGeometry geo(make_chart(c, q(-1)));
    for (int n = 0; n < 4; ++n) {
      const auto r = riemann_symmetries(geo, points20()[n]);
      EXPECT_LE(r.antisym_first, 1e-9) << label(c);
      EXPECT_LE(r.antisym_second, 1e-9) << label(c);
      EXPECT_LE(r.pair, 1e-9) << label(c);
      EXPECT_LE(r.bianchi, 1e-9) << label(c);
    }
  }
}

TEST(Ricci, FlatChart) {
  const ChartGeometry geo(make_chart(Case::Abelian, q(-1)));
  for (const auto& p : points20()) EXPECT_LE(max_abs(geo.ricci(p)), 1e-12);
}

TEST(Ricci, AllChartsRicciFlat) {
  for (Case c : kAllCases) {
    const ChartGeometry geo(make_chart(c, q(-1)));
    for (const auto& p : points20()) {
      const Mat7 ric = geo.ricci(p);
      EXPECT_LE(max_abs(ric), 1e-7) << label(c);
      EXPECT_LE(max_abs(Mat7(ric - ric.transpose())), 1e-12);
    }
  }
}

TEST(Ricci, NonFlatControl) {
  // A single exponential warp dx1^2 + e^{2t} dx2^2 + dt^2 style metric is not Ricci flat.
  Chart ch = make_chart(Case::Abelian, q(-1));
  ch.metric[1][1] = Expr::exp_t(q(2)) * Expr::exp_t(q(2));
  const ChartGeometry geo(ch);
  EXPECT_GT(max_abs(geo.ricci(points20()[0])), 1e-3);
}

TEST(Holonomy, TableDimensions) {
  const std::vector<std::pair<Case, int>> expected = {
      {Case::Abelian, 0}, {Case::H3, 3},      {Case::C12_34, 8},    {Case::C12_13_24, 14},
      {Case::C12_13, 8},  {Case::Iwasawa, 14}, {Case::C12_13_23, 14}};
  for (const auto& [c, dim] : expected) {
    const ChartGeometry geo(make_chart(c, q(-1)));
    EXPECT_EQ(dim, holonomy_dimension(holonomy(c)));
    for (int n = 0; n < 3; ++n) {
      for (double tol : {1e-9, 1e-8, 1e-7}) {
        const HolonomyResult r = holonomy_lower_bound(geo, points20()[n], tol);
        EXPECT_EQ(r.dimension, dim) << label(c) << " tol " << tol;
        EXPECT_TRUE(r.stable) << label(c);
      }
    }
  }
}

TEST(ParallelForms, ConformalPhiOnAllCharts) {
  for (Case c : kAllCases) {
    const Chart ch = make_chart(c, q(-1));
    const ChartGeometry geo(ch);
    const ExprForm f = conformal_phi(ch, phi());
    for (int n = 0; n < 5; ++n) EXPECT_LE(parallel_form_residual(geo, f, points20()[n]), 1e-7) << label(c);
  }
}

TEST(ParallelForms, FlatDirections) {
  const auto count = [](Case c) {
    const ChartGeometry geo(make_chart(c, q(-1)));
    int parallel = 0;
    for (int i = 1; i <= 6; ++i) {
      double worst = 0.0;
      for (int n = 0; n < 5; ++n) {
        worst = std::max(worst, parallel_form_residual(geo, ExprForm::basis(7, i, Expr(1)), points20()[n]));
      }
      if (worst <= 1e-10) ++parallel;
    }
    return parallel;
  };
  EXPECT_GE(count(Case::H3), 3);
  EXPECT_GE(count(Case::C12_34), 1);
  EXPECT_GE(count(Case::C12_13), 1);
  EXPECT_EQ(count(Case::C12_13_24), 0);

  const ChartGeometry g1234(make_chart(Case::C12_34, q(-1)));
  const ChartGeometry g1213(make_chart(Case::C12_13, q(-1)));
  for (const auto& p : points20()) {
    EXPECT_LE(parallel_form_residual(g1234, ExprForm::basis(7, 2, Expr(1)), p), 1e-10);
    EXPECT_LE(parallel_form_residual(g1213, ExprForm::basis(7, 1, Expr(1)), p), 1e-10);
  }
}

TEST(ParallelForms, NegativeControl) {
  const ChartGeometry geo(make_chart(Case::Abelian, q(-1)));
  const ExprForm f = ExprForm::monomial(7, {2, 3, 4}, Expr::x(1)) + ExprForm::monomial(7, {1, 5, 7}, Expr::x(2));
  EXPECT_GT(parallel_form_residual(geo, f, points20()[0]), 1e-3);
}

TEST(Homothety, ScalingFieldOnG2Metric) {
  const Chart ch = make_chart(Case::C12_13_24, q(-1));
  const HomothetyResult r = homothety_check(ch, homothety_field(q(-1)), points20());
  EXPECT_TRUE(r.homothetic);
  EXPECT_NEAR(r.c, 10.0, 1e-12);
  // symbolic: L_Z g - 10 g vanishes identically
  const ExprMatrix L = lie_derivative_metric(ch, homothety_field(q(-1)));
  for (int i = 0; i < kCoords; ++i) {
    for (int j = 0; j < kCoords; ++j) EXPECT_TRUE((L[i][j] - Expr(10) * ch.metric[i][j]).is_zero());
  }
}

TEST(Homothety, DisplayedFieldOnlyAtSpecialM) {
  const HomothetyResult bad = homothety_check(make_chart(Case::C12_13_24, q(-1)), displayed_homothety_field(q(-1)),
                                              points20());
  EXPECT_FALSE(bad.homothetic);
  const Rational m = q(5, 3);
  const HomothetyResult ok = homothety_check(make_chart(Case::C12_13_24, m), displayed_homothety_field(m), points20());
  EXPECT_TRUE(ok.homothetic);
  EXPECT_NEAR(ok.c, 10.0, 1e-12);
}

TEST(Homothety, TranslationIsKilling) {
  VectorField V;
  V[1] = Expr(1);
  const HomothetyResult r = homothety_check(make_chart(Case::C12_34, q(-1)), V, points20());
  EXPECT_TRUE(r.homothetic);
  EXPECT_NEAR(r.c, 0.0, 1e-15);
}

TEST(Homothety, ZFlatNotClosed) {
  const Chart ch = make_chart(Case::C12_13_24, q(-1));
  const Expr dz = d_flat(ch, homothety_field(q(-1)), kT, 0);
  EXPECT_FALSE(dz.is_zero());
  const Point& p = points20()[0];
  EXPECT_GT(std::abs(dz(p)), 1e-3);
  // closed form 8/5 x1 exp(2t/5) at m = -1
  EXPECT_NEAR(dz(p), 1.6 * p[0] * std::exp(0.4 * p[kT]), 1e-12);
}

TEST(Sampling, DeterministicAndInBox) {
  const auto a = sample_points(5, 50);
  const auto b = sample_points(5, 50);
  EXPECT_EQ(a, b);
  for (const auto& p : a) {
    for (int i = 0; i < 6; ++i) {
      EXPECT_GE(p[i], -1.0);
      EXPECT_LE(p[i], 1.0);
    }
    EXPECT_GE(p[kT], -0.5);
    EXPECT_LE(p[kT], 0.5);
  }
  EXPECT_NE(sample_points(6, 1), sample_points(5, 1));
}
