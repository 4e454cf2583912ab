#include <gtest/gtest.h>

#include <cmath>

#include "g2cert/flow.hpp"

using namespace g2cert;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return make_rational(p, d); }

double max_form_diff(const FormD& a, const FormD& b) { return max_abs(FormD(a - b)); }

}  // namespace

TEST(Hitchin, RecoversStandardStructure) {
  const SU3D s{to_double(standard_su3().omega), to_double(standard_su3().psi_plus),
               to_double(standard_su3().psi_minus)};
  const HitchinMetric h = hitchin_metric(s.omega, s.psi_plus);
  EXPECT_LT((h.g - Mat6::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((h.J * h.J + Mat6::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(max_form_diff(hitchin_dual(s.psi_plus, h.J), s.psi_minus), 1e-14);
}

TEST(Hitchin, ScaledCoframeGivesDiagonalMetric) {
  const ScalingAnsatz a = make_ansatz(Case::C12_13_24);
  Eigen::VectorXd u(1);
  u << 1.7;
  const SU3D s = a.reconstruct(u);
  const HitchinMetric h = hitchin_metric(s.omega, s.psi_plus);
  const double e[6] = {1.0 / 3, -1.0 / 3, -2.0 / 3, 2.0 / 3, 2.0 / 3, 1.0 / 3};
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double expect = i == j ? std::pow(1.7, 2 * e[i]) : 0.0;
      EXPECT_NEAR(h.g(i, j), expect, 1e-13);
    }
  }
  EXPECT_LT(max_form_diff(hitchin_dual(s.psi_plus, h.J), s.psi_minus), 1e-13);
}

TEST(Hitchin, RejectsDegenerateForm) {
  const FormD w = to_double(standard_su3().omega);
  EXPECT_THROW(hitchin_metric(w, FormD::monomial(6, {1, 2, 3}, 1.0)), NotAlmostComplexError);
}

TEST(Ansatz, InitialStateIsStandard) {
  const SU3Structure s0 = standard_su3();
  for (Case c : kAllCases) {
    const ScalingAnsatz a = make_ansatz(c);
    const SU3D s = a.reconstruct(a.initial());
    EXPECT_LT(max_form_diff(s.omega, to_double(s0.omega)), 1e-15) << label(c);
    EXPECT_LT(max_form_diff(s.psi_plus, to_double(s0.psi_plus)), 1e-15) << label(c);
    EXPECT_LT(max_form_diff(s.psi_minus, to_double(s0.psi_minus)), 1e-15) << label(c);
  }
}

TEST(FlowOde, H3MatchesDisplayedEquation) {
  for (const Rational& m : {q(-1), q(-2), q(3, 2)}) {
    const FlowOde ode = reduce_to_ode(Case::H3, m);
    for (double A : {-0.5, 0.0, 0.8, 3.0}) {
      Eigen::VectorXd u(1);
      u << A;
      const double expect = -2.0 / 3.0 * to_double(m) / std::sqrt(A + 1.0);
      EXPECT_NEAR(ode(u)(0), expect, 1e-13);
    }
  }
}

TEST(FlowOde, IwasawaMatchesDisplayedEquations) {
  const double m = -1.0;
  const FlowOde ode = reduce_to_ode(Case::Iwasawa, q(-1));
  for (double Q : {0.6, 1.0, 1.4}) {
    Eigen::VectorXd u(2);
    u << Q, std::pow(Q, 4) - 1.0;
    const Eigen::VectorXd du = ode(u);
    EXPECT_NEAR(du(0), -m / 3.0 / (Q * Q), 1e-13);
    EXPECT_NEAR(du(1), -4.0 / 3.0 * m * Q, 1e-13);
  }
}

TEST(FlowOde, AbelianIsStatic) {
  const FlowOde ode = reduce_to_ode(Case::Abelian, q(-1));
  Eigen::VectorXd u(1);
  u << 2.0;
  EXPECT_EQ(ode(u).norm(), 0.0);
}

TEST(FlowOde, RejectsWrongFamily) {
  // the h3 coframe scaling is not preserved by the 12+34 flow
  ScalingAnsatz a = make_ansatz(Case::H3);
  a.kase = Case::C12_34;
  const FlowOde ode(a, base_algebra(Case::C12_34, q(-1)));
  Eigen::VectorXd u(1);
  u << 0.0;
  EXPECT_THROW(ode(u), AnsatzInconsistentError);
}

TEST(FlowOde, DomainError) {
  const FlowOde ode = reduce_to_ode(Case::H3, q(-1));
  Eigen::VectorXd u(1);
  u << -1.5;
  EXPECT_THROW(ode(u), FlowDomainError);
}

TEST(Flow, H3AndIwasawaValues) {
  const FlowOde h3 = reduce_to_ode(Case::H3, q(-1));
  const auto th = integrate(h3, h3.ansatz().initial(), 0.5, 1e-3);
  EXPECT_NEAR(th.back().tau, 0.5, 1e-15);
  EXPECT_NEAR(th.back().u(0), std::pow(1.5, 2.0 / 3) - 1.0, 1e-8);
  const FlowOde iw = reduce_to_ode(Case::Iwasawa, q(-1));
  const auto ti = integrate(iw, iw.ansatz().initial(), 0.5, 1e-3);
  EXPECT_NEAR(ti.back().u(0), std::cbrt(1.5), 1e-8);
}

TEST(Flow, TrajectoriesMatchClosedForms) {
  for (Case c : kNonAbelianCases) {
    for (const Rational& m : {q(-1), q(-3, 2)}) {
      const double md = to_double(m);
      const FlowOde ode = reduce_to_ode(c, m);
      const auto traj = integrate(ode, ode.ansatz().initial(), 0.5, 1e-3);
      const SU3D s = ode.ansatz().reconstruct(traj.back().u);
      const auto [w, p] = closed_form(c, 0.5, md);
      EXPECT_LT(max_form_diff(s.omega, w), 1e-8) << label(c);
      EXPECT_LT(max_form_diff(s.psi_plus, p), 1e-8) << label(c);
      EXPECT_LT((traj.back().u - exact_state(c, 0.5, md)).cwiseAbs().maxCoeff(), 1e-8) << label(c);
    }
  }
}

TEST(Flow, CompatibilityPreservedAlongTrajectories) {
  for (Case c : kAllCases) {
    const FlowOde ode = reduce_to_ode(c, q(-1));
    const auto traj = integrate(ode, ode.ansatz().initial(), 1.0, 1e-2);
    for (const auto& st : traj) EXPECT_LE(compatibility_error(ode.ansatz().reconstruct(st.u)), 1e-8) << label(c);
  }
}

TEST(Flow, HalfFlatAlongTrajectories) {
  for (Case c : kNonAbelianCases) {
    const LieAlgebra base = base_algebra(c, q(-1));
    const auto de = lift_differentials<double>(base);
    const FlowOde ode(make_ansatz(c), base);
    const auto traj = integrate(ode, ode.ansatz().initial(), 0.5, 1e-2);
    for (const auto& st : traj) {
      const SU3D s = ode.ansatz().reconstruct(st.u);
      EXPECT_LE(max_abs(ce_differential(de, s.psi_plus)), 1e-12);
      EXPECT_LE(max_abs(ce_differential(de, wedge(s.omega, s.omega))), 1e-12);
    }
  }
}

TEST(Flow, ClosureOfPhiAndDual) {
  for (Case c : kNonAbelianCases) {
    for (double tau : {0.0, 0.3, 0.7}) EXPECT_LE(hitchin_closure_residual(c, q(-1), tau), 1e-7) << label(c);
  }
}

TEST(Flow, RungeKuttaOrder) {
  for (Case c : kNonAbelianCases) {
    const double order = convergence_order(c, q(-1), 1.0, {0.1, 0.05, 0.025});
    EXPECT_GE(order, 3.9) << label(c);
  }
}

TEST(Flow, MetricMatchesChart) {
  const auto pts = sample_points(7, 4);
  for (Case c : kNonAbelianCases) {
    for (const Rational& m : {q(-1), q(-2)}) {
      const Chart ch = make_chart(c, m);
      for (double t : {-0.5, -0.2, 0.0, 0.3, 0.5}) {
        for (const Point& p : pts) EXPECT_LE(flow_metric_correspondence(ch, t, p), 1e-10) << label(c) << " t=" << t;
      }
    }
  }
}

TEST(Flow, ClosedFormRejectsTorusAndSingularTime) {
  EXPECT_THROW(closed_form(Case::Abelian, 0.1, -1.0), UnknownCaseError);
  EXPECT_THROW(closed_form(Case::H3, 2.0, 1.0), FlowDomainError);
}

TEST(Flow, RejectsBadStep) {
  const FlowOde ode = reduce_to_ode(Case::H3, q(-1));
  EXPECT_THROW(integrate(ode, ode.ansatz().initial(), 0.5, 0.0), std::invalid_argument);
}
