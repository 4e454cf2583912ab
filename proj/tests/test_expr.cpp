#include <gtest/gtest.h>

#include <cmath>

#include "g2cert/expr.hpp"

using namespace g2cert;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return make_rational(p, d); }

const Point kP = {0.3, -0.7, 0.2, 0.9, -0.4, 0.5, 0.25};

}  // namespace

TEST(Expr, Arithmetic) {
  const Expr a = Expr::x(1) * Expr::x(2) + Expr(q(3, 2));
  const Expr b = Expr::exp_t(q(2, 3)) * Expr::x(5);
  EXPECT_DOUBLE_EQ(a(kP), 0.3 * -0.7 + 1.5);
  EXPECT_NEAR(b(kP), std::exp(2.0 / 3.0 * 0.25) * -0.4, 1e-15);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(Expr::exp_t(q(1)) * Expr::exp_t(q(-1)), Expr(1));
  EXPECT_TRUE(Expr(5).is_constant());
  EXPECT_FALSE(Expr::t().is_constant());
}

TEST(Expr, Derivatives) {
  // d/dt (t^2 exp(3t)) = 2t exp(3t) + 3 t^2 exp(3t)
  const Expr f = Expr::t() * Expr::t() * Expr::exp_t(q(3));
  const Expr expected = Expr(2) * Expr::t() * Expr::exp_t(q(3)) + Expr(3) * Expr::t() * Expr::t() * Expr::exp_t(q(3));
  EXPECT_EQ(f.derivative(kT), expected);
  const Expr g = Expr::x(3) * Expr::x(3) * Expr::x(4);
  EXPECT_EQ(g.derivative(2), Expr(2) * Expr::x(3) * Expr::x(4));
  EXPECT_TRUE(g.derivative(0).is_zero());
}

TEST(Expr, MixedPartialsCommute) {
  const Expr f = Expr(q(4, 9)) * Expr::exp_t(q(-2, 3)) * (Expr::x(3) + Expr::x(5) * Expr::x(1)) *
                 (Expr::x(3) + Expr::x(5) * Expr::x(1));
  for (int i = 0; i < kCoords; ++i) {
    for (int j = 0; j < kCoords; ++j) EXPECT_EQ(f.derivative(i).derivative(j), f.derivative(j).derivative(i));
  }
}

TEST(Expr, CompiledMatchesInterpreted) {
  const Expr f = Expr(q(-2, 3)) * Expr::exp_t(q(4, 3)) * (Expr::x(3) + Expr::x(5) * Expr::x(1)) + Expr::t();
  EXPECT_NEAR(CompiledExpr(f)(kP), f(kP), 1e-15);
}

TEST(Jet2, ProductAndExp) {
  // f = x * exp(y) at (2, 0): f_x = 1, f_y = 2, f_xy = 1
  const Jet2 x(2.0, 1.0, 0.0, 0.0);
  const Jet2 y(0.0, 0.0, 1.0, 0.0);
  const Jet2 f = x * exp(y);
  EXPECT_DOUBLE_EQ(f.v, 2.0);
  EXPECT_DOUBLE_EQ(f.a, 1.0);
  EXPECT_DOUBLE_EQ(f.b, 2.0);
  EXPECT_DOUBLE_EQ(f.ab, 1.0);
}

TEST(Jet2, DivisionAndSqrt) {
  // d^2/dx^2 of 1/x and sqrt(x) at x = 4
  const Jet2 x(4.0, 1.0, 1.0, 0.0);
  const Jet2 inv = Jet2(1.0) / x;
  EXPECT_DOUBLE_EQ(inv.a, -1.0 / 16.0);
  EXPECT_DOUBLE_EQ(inv.ab, 2.0 / 64.0);
  const Jet2 s = sqrt(x);
  EXPECT_DOUBLE_EQ(s.v, 2.0);
  EXPECT_DOUBLE_EQ(s.a, 0.25);
  EXPECT_DOUBLE_EQ(s.ab, -0.25 / 8.0);
}

TEST(Jet2, AgreesWithSymbolicSecondPartials) {
  const Expr f = Expr(q(9, 25)) * Expr::exp_t(q(-4, 5)) *
                 (Expr::x(3) - Expr(q(2, 3)) * Expr::x(1) * Expr::x(5) + Expr::x(4) * Expr::x(6)) * Expr::x(2);
  for (int i = 0; i < kCoords; ++i) {
    for (int j = 0; j < kCoords; ++j) {
      const Jet2 v = f.eval<Jet2>(seed(kP, i, j));
      EXPECT_NEAR(v.a, f.derivative(i)(kP), 1e-13);
      EXPECT_NEAR(v.b, f.derivative(j)(kP), 1e-13);
      EXPECT_NEAR(v.ab, f.derivative(i).derivative(j)(kP), 1e-13);
    }
  }
}

TEST(ExprForm, WedgeOverExpr) {
  const ExprForm a = ExprForm::basis(7, 1, Expr::x(2));
  const ExprForm b = ExprForm::basis(7, 3, Expr::exp_t(q(1)));
  const ExprForm w = wedge(a, b);
  EXPECT_EQ(w.coefficient({1, 3}), Expr::x(2) * Expr::exp_t(q(1)));
  EXPECT_TRUE(wedge(a, a).is_zero());
}
