#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "g2cert/catalog.hpp"
#include "g2cert/metrics.hpp"
#include "g2cert/structures.hpp"

namespace g2cert {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using SU3D = BasicSU3<double>;

/// coefficient(u) = sign * prod_k (u_k + shift_k)^exps_k
struct MonomialLaw {
  MultiIndex idx;
  double sign = 1.0;
  std::vector<double> exps;
};

/// Family of SU(3) structures on R^6 parametrized by a small state vector.
struct ScalingAnsatz {
  Case kase = Case::Abelian;
  std::vector<double> u0;
  std::vector<double> shift;
  std::vector<MonomialLaw> omega;
  std::vector<MonomialLaw> psi_plus;
  std::vector<MonomialLaw> psi_minus;

  int dim() const noexcept { return static_cast<int>(u0.size()); }

  bool in_domain(const Eigen::VectorXd& u) const {
    for (int k = 0; k < dim(); ++k) {
      if (!(u(k) + shift[k] > 0.0)) return false;
    }
    return true;
  }

  double value(const MonomialLaw& law, const Eigen::VectorXd& u) const {
    double v = law.sign;
    for (int k = 0; k < dim(); ++k) {
      if (law.exps[k] != 0.0) v *= std::pow(u(k) + shift[k], law.exps[k]);
    }
    return v;
  }

  FormD build(const std::vector<MonomialLaw>& laws, int grade, const Eigen::VectorXd& u) const {
    FormD f(6, grade);
    for (const auto& law : laws) f.add_term(law.idx, value(law, u));
    return f;
  }

  /// d/du_k of the family.
  FormD build_partial(const std::vector<MonomialLaw>& laws, int grade, const Eigen::VectorXd& u, int k) const {
    FormD f(6, grade);
    for (const auto& law : laws) {
      if (law.exps[k] == 0.0) continue;
      f.add_term(law.idx, value(law, u) * law.exps[k] / (u(k) + shift[k]));
    }
    return f;
  }

  SU3D reconstruct(const Eigen::VectorXd& u) const {
    return SU3D{build(omega, 2, u), build(psi_plus, 3, u), build(psi_minus, 3, u)};
  }

  Eigen::VectorXd initial() const { return Eigen::Map<const Eigen::VectorXd>(u0.data(), dim()); }
};

namespace detail {

/// Laws for the standard structure in the coframe f_i e^i with
/// f_i = prod_k (u_k + b_k)^{q[i][k]}.
inline std::vector<MonomialLaw> coframe_laws(const FormD& standard, const std::vector<std::vector<double>>& q) {
  std::vector<MonomialLaw> out;
  const std::size_t d = q.front().size();
  for (const auto& [key, c] : standard.terms()) {
    MonomialLaw law{key, c, std::vector<double>(d, 0.0)};
    for (int i : key.indices()) {
      for (std::size_t k = 0; k < d; ++k) law.exps[k] += q[i - 1][k];
    }
    out.push_back(std::move(law));
  }
  return out;
}

inline ScalingAnsatz coframe_ansatz(Case c, std::vector<double> exps, double u0, double shift) {
  const SU3Structure s = standard_su3();
  std::vector<std::vector<double>> q;
  for (double e : exps) q.push_back({e});
  ScalingAnsatz a;
  a.kase = c;
  a.u0 = {u0};
  a.shift = {shift};
  a.omega = coframe_laws(to_double(s.omega), q);
  a.psi_plus = coframe_laws(to_double(s.psi_plus), q);
  a.psi_minus = coframe_laws(to_double(s.psi_minus), q);
  return a;
}

}  // namespace detail

/// Per-case ansatz. (h3): state A with coframe (A+1)^{(1/2,0,-1/2,0,1/2,0)}.
/// Iwasawa: state (Q, F) with psi+- = Q psi0+-, omega from (F+1)^{+-1/2}.
/// Remaining cases: state x = e^{14} coefficient of omega.
inline ScalingAnsatz make_ansatz(Case c) {
  switch (c) {
    case Case::Abelian: return detail::coframe_ansatz(c, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}, 1.0, 0.0);
    case Case::H3: return detail::coframe_ansatz(c, {0.5, 0.0, -0.5, 0.0, 0.5, 0.0}, 0.0, 1.0);
    case Case::C12_34: return detail::coframe_ansatz(c, {0.5, 0.0, -1.0, 0.5, 0.5, 0.5}, 1.0, 0.0);
    case Case::C12_13_24:
      return detail::coframe_ansatz(c, {1.0 / 3, -1.0 / 3, -2.0 / 3, 2.0 / 3, 2.0 / 3, 1.0 / 3}, 1.0, 0.0);
    case Case::C12_13: return detail::coframe_ansatz(c, {0.0, -0.5, -0.5, 1.0, 0.5, 0.5}, 1.0, 0.0);
    case Case::C12_13_23: return detail::coframe_ansatz(c, {2.0, 2.0, -1.0, -1.0, 2.0, -1.0}, 1.0, 0.0);
    case Case::Iwasawa: {
      const SU3Structure s = standard_su3();
      ScalingAnsatz a;
      a.kase = c;
      a.u0 = {1.0, 0.0};
      a.shift = {0.0, 1.0};
      for (const auto& [key, v] : s.omega.terms()) {
        const double e = (key == MultiIndex({2, 3})) ? -0.5 : 0.5;
        a.omega.push_back({key, to_double(v), {0.0, e}});
      }
      for (const auto& [key, v] : s.psi_plus.terms()) a.psi_plus.push_back({key, to_double(v), {1.0, 0.0}});
      for (const auto& [key, v] : s.psi_minus.terms()) a.psi_minus.push_back({key, to_double(v), {1.0, 0.0}});
      return a;
    }
  }
  throw UnknownCaseError("no ansatz for case");
}

/// Right-hand side u' = F(u) of the evolution d^omega = d_tau psi+,
/// d^psi- = -omega ^ d_tau omega restricted to an ansatz family, by least
/// squares over all 3- and 4-form components.
class FlowOde {
 public:
  FlowOde(ScalingAnsatz ansatz, const LieAlgebra& base, double tol = 1e-12)
      : ansatz_(std::move(ansatz)), de_(lift_differentials<double>(base)), tol_(tol) {
    if (base.dim() != 6) throw DimensionError("flow needs a 6-dimensional base");
    for (std::uint32_t b = 0; b < 64; ++b) {
      if (std::popcount(b) == 3) keys3_.push_back(MultiIndex::from_bits(b));
      if (std::popcount(b) == 4) keys4_.push_back(MultiIndex::from_bits(b));
    }
    std::sort(keys3_.begin(), keys3_.end());
    std::sort(keys4_.begin(), keys4_.end());
  }

  const ScalingAnsatz& ansatz() const noexcept { return ansatz_; }

  /// Returns u' and writes the out-of-span residual.
  Eigen::VectorXd solve(const Eigen::VectorXd& u, double* residual = nullptr) const {
    if (!ansatz_.in_domain(u)) throw FlowDomainError("state left the domain of the ansatz");
    const SU3D s = ansatz_.reconstruct(u);
    const FormD d_omega = ce_differential(de_, s.omega);
    const FormD d_psi_minus = ce_differential(de_, s.psi_minus);
    const int d = ansatz_.dim();
    const int rows = static_cast<int>(keys3_.size() + keys4_.size());
    Eigen::MatrixXd A(rows, d);
    Eigen::VectorXd b(rows);
    for (int k = 0; k < d; ++k) {
      const FormD dpsi = ansatz_.build_partial(ansatz_.psi_plus, 3, u, k);
      const FormD dhalf_w2 = wedge(s.omega, ansatz_.build_partial(ansatz_.omega, 2, u, k));
      int r = 0;
      for (const auto& key : keys3_) A(r++, k) = dpsi.coefficient(key);
      for (const auto& key : keys4_) A(r++, k) = dhalf_w2.coefficient(key);
    }
    int r = 0;
    for (const auto& key : keys3_) b(r++) = d_omega.coefficient(key);
    for (const auto& key : keys4_) b(r++) = -d_psi_minus.coefficient(key);
    const Eigen::VectorXd du = A.completeOrthogonalDecomposition().solve(b);
    const double res = (A * du - b).cwiseAbs().maxCoeff();
    if (residual) *residual = res;
    if (res > tol_) throw AnsatzInconsistentError("evolution leaves the ansatz family");
    return du;
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& u) const { return solve(u); }

 private:
  ScalingAnsatz ansatz_;
  std::vector<FormD> de_;
  double tol_;
  std::vector<MultiIndex> keys3_;
  std::vector<MultiIndex> keys4_;
};

inline FlowOde reduce_to_ode(Case c, const Rational& m) { return FlowOde(make_ansatz(c), base_algebra(c, m)); }

struct FlowState {
  double tau = 0.0;
  Eigen::VectorXd u;
};

/// Classical fourth-order Runge-Kutta on [0, tau_max]; the step is adjusted
/// down so the last step lands on tau_max.
template <class Rhs>
std::vector<FlowState> integrate(const Rhs& f, Eigen::VectorXd u0, double tau_max, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(tau_max >= 0.0)) throw std::invalid_argument("tau_max must be nonnegative");
  const long n = std::max(1L, static_cast<long>(std::ceil(tau_max / h - 1e-9)));
  const double step = tau_max / static_cast<double>(n);
  std::vector<FlowState> out;
  out.reserve(n + 1);
  out.push_back({0.0, u0});
  Eigen::VectorXd u = std::move(u0);
  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd k1 = f(u);
    const Eigen::VectorXd k2 = f(Eigen::VectorXd(u + 0.5 * step * k1));
    const Eigen::VectorXd k3 = f(Eigen::VectorXd(u + 0.5 * step * k2));
    const Eigen::VectorXd k4 = f(Eigen::VectorXd(u + step * k3));
    u += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back({static_cast<double>(i + 1) * step, u});
  }
  return out;
}

/// Exact state of the ansatz along the flow (s = 1 - m tau).
inline Eigen::VectorXd exact_state(Case c, double tau, double m) {
  const double s = 1.0 - m * tau;
  if (!(s > 0.0)) throw FlowDomainError("tau beyond the singular time");
  Eigen::VectorXd u(c == Case::Iwasawa ? 2 : 1);
  switch (c) {
    case Case::Abelian: u(0) = 1.0; break;
    case Case::H3: u(0) = std::pow(s, 2.0 / 3) - 1.0; break;
    case Case::Iwasawa:
      u(0) = std::cbrt(s);
      u(1) = std::pow(s, 4.0 / 3) - 1.0;
      break;
    case Case::C12_34:
    case Case::C12_13: u(0) = std::sqrt(s); break;
    case Case::C12_13_24: u(0) = std::pow(s, 3.0 / 5); break;
    case Case::C12_13_23: u(0) = std::pow(s, 1.0 / 5); break;
  }
  return u;
}

namespace detail {

struct PowerTerm {
  std::array<int, 3> idx;  // 2-forms use the first two entries, third = 0
  double sign;
  double power;  // of (1 - m tau)
};

}  // namespace detail

/// (omega(tau), psi+(tau)) of the explicit solutions, term by term.
inline std::pair<FormD, FormD> closed_form(Case c, double tau, double m) {
  using detail::PowerTerm;
  std::vector<PowerTerm> w;
  std::vector<PowerTerm> p;
  auto omega3 = [&](double a) {
    w = {{{1, 4, 0}, 1.0, a}, {{5, 6, 0}, 1.0, a}, {{2, 3, 0}, -1.0, -a}};
  };
  switch (c) {
    case Case::Abelian: throw UnknownCaseError("no flow for the torus");
    case Case::H3:
      omega3(1.0 / 3);
      p = {{{1, 2, 5}, 1.0, 2.0 / 3}, {{3, 4, 5}, -1.0, 0.0}, {{1, 3, 6}, 1.0, 0.0}, {{2, 4, 6}, 1.0, 0.0}};
      break;
    case Case::Iwasawa:
      omega3(2.0 / 3);
      p = {{{1, 2, 5}, 1.0, 1.0 / 3}, {{3, 4, 5}, -1.0, 1.0 / 3}, {{1, 3, 6}, 1.0, 1.0 / 3}, {{2, 4, 6}, 1.0, 1.0 / 3}};
      break;
    case Case::C12_34:
      omega3(0.5);
      p = {{{1, 2, 5}, 1.0, 0.5}, {{2, 4, 6}, 1.0, 0.5}, {{1, 3, 6}, 1.0, 0.0}, {{3, 4, 5}, -1.0, 0.0}};
      break;
    case Case::C12_13_24:
      omega3(3.0 / 5);
      p = {{{3, 4, 5}, -1.0, 2.0 / 5}, {{1, 2, 5}, 1.0, 2.0 / 5}, {{2, 4, 6}, 1.0, 2.0 / 5}, {{1, 3, 6}, 1.0, 0.0}};
      break;
    case Case::C12_13:
      omega3(0.5);
      p = {{{1, 2, 5}, 1.0, 0.0}, {{1, 3, 6}, 1.0, 0.0}, {{2, 4, 6}, 1.0, 0.5}, {{3, 4, 5}, -1.0, 0.5}};
      break;
    case Case::C12_13_23:
      w = {{{1, 4, 0}, 1.0, 0.2}, {{2, 3, 0}, -1.0, 0.2}, {{5, 6, 0}, 1.0, 0.2}};
      p = {{{1, 2, 5}, 1.0, 6.0 / 5}, {{1, 3, 6}, 1.0, 0.0}, {{2, 4, 6}, 1.0, 0.0}, {{3, 4, 5}, -1.0, 0.0}};
      break;
  }
  const double s = 1.0 - m * tau;
  if (!(s > 0.0)) throw FlowDomainError("tau beyond the singular time");
  FormD omega(6, 2), psi(6, 3);
  for (const auto& t : w) omega.add_term(MultiIndex({t.idx[0], t.idx[1]}), t.sign * std::pow(s, t.power));
  for (const auto& t : p) psi.add_term(MultiIndex({t.idx[0], t.idx[1], t.idx[2]}), t.sign * std::pow(s, t.power));
  return {omega, psi};
}

namespace detail {

using Tensor3 = std::array<double, 216>;

inline Tensor3 dense3(const FormD& f) {
  Tensor3 P{};
  for (const auto& [key, v] : f.terms()) {
    const auto id = key.indices();
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    for (int s = 0; s < 6; ++s) {
      const double sign = s < 3 ? 1.0 : -1.0;
      P[((id[perms[s][0]] - 1) * 6 + (id[perms[s][1]] - 1)) * 6 + (id[perms[s][2]] - 1)] = sign * v;
    }
  }
  return P;
}

inline Mat6 dense2(const FormD& f) {
  Mat6 W = Mat6::Zero();
  for (const auto& [key, v] : f.terms()) {
    const auto id = key.indices();
    W(id[0] - 1, id[1] - 1) = v;
    W(id[1] - 1, id[0] - 1) = -v;
  }
  return W;
}

}  // namespace detail

struct HitchinMetric {
  Mat6 J;  // column j holds J e_j
  Mat6 g;  // g(X, Y) = omega(X, J Y)
};

/// Almost complex structure of a stable 3-form via
/// K^a_b = eps^{a i1..i5} P_{b i1 i2} P_{i3 i4 i5}, J = K / sqrt(-tr K^2 / 6),
/// and the metric it induces with omega.
inline HitchinMetric hitchin_metric(const FormD& omega, const FormD& psi_plus) {
  const detail::Tensor3 P = detail::dense3(psi_plus);
  auto at = [&](int i, int j, int k) { return P[(i * 6 + j) * 6 + k]; };
  Mat6 K = Mat6::Zero();
  for (int a = 0; a < 6; ++a) {
    std::array<int, 5> rest{};
    int n = 0;
    for (int i = 0; i < 6; ++i) {
      if (i != a) rest[n++] = i;
    }
    // sign of (a, rest...) relative to (0..5)
    const double base_sign = (a % 2 == 0) ? 1.0 : -1.0;
    std::array<int, 5> perm = rest;
    do {
      int inv = 0;
      for (int x = 0; x < 5; ++x) {
        for (int y = x + 1; y < 5; ++y) inv += perm[x] > perm[y];
      }
      const double sign = base_sign * ((inv % 2 == 0) ? 1.0 : -1.0);
      const double tail = at(perm[2], perm[3], perm[4]);
      if (tail == 0.0) continue;
      for (int b = 0; b < 6; ++b) K(a, b) += sign * at(b, perm[0], perm[1]) * tail;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  const double lambda = (K * K).trace() / 6.0;
  if (!(lambda < 0.0)) throw NotAlmostComplexError("3-form is not of complex type");
  HitchinMetric h;
  h.J = K / std::sqrt(-lambda);
  const Mat6 W = detail::dense2(omega);
  h.g = W * h.J;
  if (h.g.trace() < 0.0) {
    h.J = -h.J;
    h.g = -h.g;
  }
  return h;
}

/// psi-(X, Y, Z) = psi+(JX, JY, JZ).
inline FormD hitchin_dual(const FormD& psi_plus, const Mat6& J) {
  const detail::Tensor3 P = detail::dense3(psi_plus);
  FormD out(6, 3);
  for (std::uint32_t bits = 0; bits < 64; ++bits) {
    if (std::popcount(bits) != 3) continue;
    const auto id = MultiIndex::from_bits(bits).indices();
    double v = 0.0;
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        for (int c = 0; c < 6; ++c) {
          const double p = P[(a * 6 + b) * 6 + c];
          if (p != 0.0) v += p * J(a, id[0] - 1) * J(b, id[1] - 1) * J(c, id[2] - 1);
        }
      }
    }
    if (std::abs(v) > 1e-15) out.add_term(MultiIndex::from_bits(bits), v);
  }
  return out;
}

/// Largest absolute compatibility residual of a float structure.
inline double compatibility_error(const SU3D& s) {
  const auto [w_psi, norm] = compatibility_residuals(s);
  return std::max(max_abs(w_psi), std::abs(norm));
}

/// max |g_flow - g_chart| over coordinates at (x, t), where
/// g_flow = Theta^T g6(tau) Theta + exp(-2mt) dt^2, tau = (1 - exp(-mt))/m and
/// Theta is the chart coframe at t = 0.
inline double flow_metric_correspondence(const Chart& ch, double t, const Point& x) {
  const double m = to_double(ch.m);
  const double tau = (1.0 - std::exp(-m * t)) / m;
  const auto [omega, psi] = closed_form(ch.kase, tau, m);
  const Mat6 g6 = hitchin_metric(omega, psi).g;
  Point base = x;
  base[kT] = 0.0;
  Eigen::Matrix<double, 6, kCoords> theta;
  for (int i = 0; i < 6; ++i) {
    for (int mu = 0; mu < kCoords; ++mu) theta(i, mu) = ch.coframe[i][mu](base);
  }
  Mat7 flow = theta.transpose() * g6 * theta;
  flow(kT, kT) += std::exp(-2.0 * m * t);
  Point p = x;
  p[kT] = t;
  return max_abs(Mat7(flow - evaluate(ch.metric, p)));
}

/// Closure of phi = omega ^ dtau + psi+ and of its dual along the explicit
/// solution, with tau-derivatives by a five-point stencil:
/// returns max over (d^psi+, d^omega - d_tau psi+, d^omega^2 / 2, d^psi- + d_tau omega^2 / 2).
inline double hitchin_closure_residual(Case c, const Rational& m_exact, double tau, double delta = 1e-3) {
  const double m = to_double(m_exact);
  const std::vector<FormD> de = lift_differentials<double>(base_algebra(c, m_exact));
  auto forms = [&](double tt) {
    auto [w, p] = closed_form(c, tt, m);
    const HitchinMetric h = hitchin_metric(w, p);
    return SU3D{w, p, hitchin_dual(p, h.J)};
  };
  const double coeff[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  const double offs[4] = {-2, -1, 1, 2};
  FormD dpsi(6, 3), dhalf(6, 4);
  for (int k = 0; k < 4; ++k) {
    const SU3D s = forms(tau + offs[k] * delta);
    dpsi += (coeff[k] / delta) * s.psi_plus;
    dhalf += (coeff[k] / (2.0 * delta)) * wedge(s.omega, s.omega);
  }
  const SU3D s = forms(tau);
  double worst = 0.0;
  worst = std::max(worst, max_abs(ce_differential(de, s.psi_plus)));
  worst = std::max(worst, max_abs(ce_differential(de, s.omega) - dpsi));
  worst = std::max(worst, max_abs(ce_differential(de, wedge(s.omega, s.omega))));
  worst = std::max(worst, max_abs(ce_differential(de, s.psi_minus) + dhalf));
  return worst;
}

/// Observed order log2(e(h)/e(h/2)) from the final-state errors against the
/// exact solution, minimized over successive halvings.
inline double convergence_order(Case c, const Rational& m_exact, double tau_max, const std::vector<double>& steps) {
  const double m = to_double(m_exact);
  const FlowOde ode = reduce_to_ode(c, m_exact);
  const Eigen::VectorXd exact = exact_state(c, tau_max, m);
  std::vector<double> errs;
  for (double h : steps) {
    const auto traj = integrate(ode, ode.ansatz().initial(), tau_max, h);
    errs.push_back((traj.back().u - exact).cwiseAbs().maxCoeff());
  }
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    order = std::min(order, std::log2(errs[i] / errs[i + 1]) / std::log2(steps[i] / steps[i + 1]));
  }
  return order;
}

}  // namespace g2cert
