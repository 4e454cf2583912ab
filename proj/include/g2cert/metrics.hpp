#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "g2cert/catalog.hpp"
#include "g2cert/expr.hpp"

namespace g2cert {

using OneForm = std::array<Expr, kCoords>;  // coefficients of dx1..dx6, dt
using VectorField = std::array<Expr, kCoords>;
using ExprMatrix = std::array<std::array<Expr, kCoords>, kCoords>;
using Mat7 = Eigen::Matrix<double, kCoords, kCoords>;

inline OneForm dx(int i) {
  OneForm f;
  f[i - 1] = Expr(1);
  return f;
}
inline OneForm dt() { return dx(kCoords); }

inline OneForm operator+(OneForm a, const OneForm& b) {
  for (int i = 0; i < kCoords; ++i) a[i] += b[i];
  return a;
}
inline OneForm operator-(OneForm a, const OneForm& b) {
  for (int i = 0; i < kCoords; ++i) a[i] -= b[i];
  return a;
}
inline OneForm operator*(const Expr& s, OneForm a) {
  for (auto& c : a) c = s * c;
  return a;
}

inline ExprForm to_form(const OneForm& f) {
  ExprForm out(kCoords, 1);
  for (int i = 0; i < kCoords; ++i) out.add_term(MultiIndex({i + 1}), f[i]);
  return out;
}

/// Coordinate exterior derivative of a form with Expr coefficients.
inline ExprForm exterior_derivative(const ExprForm& f) {
  ExprForm out(kCoords, f.is_homogeneous() && f.grade() < kCoords ? f.grade() + 1 : ExprForm::kMixed);
  for (const auto& [key, coeff] : f.terms()) {
    for (int mu = 0; mu < kCoords; ++mu) {
      if (key.contains(mu + 1)) continue;
      const Expr d = coeff.derivative(mu);
      if (d.is_zero()) continue;
      const int s = wedge_sign(MultiIndex({mu + 1}), key);
      out.add_term(MultiIndex::from_bits(key.bits() | MultiIndex::bit(mu + 1)), s > 0 ? d : -d);
    }
  }
  return out;
}

/// Coordinate expression of a left-invariant coframe and the metric
/// g = exp(-2mt) sum_a (e^a)^2.
struct Chart {
  Case kase = Case::Abelian;
  Rational m;
  std::array<OneForm, kCoords> coframe;  // e^1..e^7
  ExprMatrix metric;
};

namespace detail {

inline ExprMatrix assemble_metric(const std::array<OneForm, kCoords>& rows, const Expr& weight) {
  ExprMatrix g;
  for (int mu = 0; mu < kCoords; ++mu) {
    for (int nu = mu; nu < kCoords; ++nu) {
      Expr s;
      for (const auto& r : rows) s += r[mu] * r[nu];
      g[mu][nu] = weight * s;
      g[nu][mu] = g[mu][nu];
    }
  }
  return g;
}

struct WeightedSquare {
  Expr weight;
  OneForm form;
};

inline ExprMatrix sum_of_squares(const std::vector<WeightedSquare>& squares) {
  ExprMatrix g;
  for (const auto& sq : squares) {
    for (int mu = 0; mu < kCoords; ++mu) {
      for (int nu = 0; nu < kCoords; ++nu) g[mu][nu] += sq.weight * sq.form[mu] * sq.form[nu];
    }
  }
  return g;
}

}  // namespace detail

/// Coframe in global coordinates (x1..x6, t) for a catalog case.
inline Chart make_chart(Case c, const Rational& m) {
  if (m == 0) throw std::invalid_argument("chart needs m != 0");
  auto r = [](std::int64_t p, std::int64_t q) { return make_rational(p, q); };
  auto E = [&](std::int64_t p, std::int64_t q) { return Expr::exp_t(r(p, q) * m); };
  auto K = [&](std::int64_t p, std::int64_t q) { return Expr(r(p, q) * m); };  // constant multiple of m
  auto C = [&](std::int64_t p, std::int64_t q) { return Expr(r(p, q)); };
  auto X = [](int i) { return Expr::x(i); };

  Chart ch;
  ch.kase = c;
  ch.m = m;
  auto& e = ch.coframe;
  e[6] = dt();
  switch (c) {
    case Case::Abelian:
      for (int i = 1; i <= 6; ++i) e[i - 1] = E(1, 1) * dx(i);
      break;
    case Case::H3:
      e[0] = E(2, 3) * dx(1);
      e[4] = E(2, 3) * dx(5);
      e[1] = E(1, 1) * dx(2);
      e[3] = E(1, 1) * dx(4);
      e[5] = E(1, 1) * dx(6);
      e[2] = (K(-2, 3) * E(4, 3)) * (dx(3) + X(5) * dx(1));
      break;
    case Case::C12_34:
      for (int i : {1, 4, 5, 6}) e[i - 1] = E(3, 4) * dx(i);
      e[1] = E(1, 1) * dx(2);
      e[2] = (K(-1, 2) * E(3, 2)) * (C(3, 2) * dx(3) + X(5) * dx(1) + X(4) * dx(6));
      break;
    case Case::C12_13_24:
      e[0] = E(4, 5) * dx(1);
      e[5] = E(4, 5) * dx(6);
      e[1] = (K(-3, 5) * E(6, 5)) * (dx(2) + (C(2, 3) * X(4)) * dx(5));
      e[2] = (K(-3, 5) * E(7, 5)) * (dx(3) - (C(2, 3) * X(1)) * dx(5) + (C(2, 3) * X(4)) * dx(6));
      e[3] = E(3, 5) * dx(4);
      e[4] = E(3, 5) * dx(5);
      break;
    case Case::C12_13:
      e[0] = E(1, 1) * dx(1);
      e[3] = E(1, 2) * dx(4);
      e[1] = (K(1, 2) * E(5, 4)) * (C(-3, 2) * dx(2) + X(5) * dx(4));
      e[2] = (K(1, 2) * E(5, 4)) * (C(-3, 2) * dx(3) + X(6) * dx(4));
      e[4] = E(3, 4) * dx(5);
      e[5] = E(3, 4) * dx(6);
      break;
    case Case::Iwasawa:
      for (int i : {1, 4, 5, 6}) e[i - 1] = E(2, 3) * dx(i);
      e[1] = (K(1, 3) * E(4, 3)) * (C(2, 1) * dx(2) + X(6) * dx(1) - X(4) * dx(5));
      e[2] = (K(-1, 3) * E(4, 3)) * (C(2, 1) * dx(3) + X(5) * dx(1) + X(4) * dx(6));
      break;
    case Case::C12_13_23:
      for (int i : {1, 2, 5}) e[i - 1] = E(3, 5) * dx(i);
      e[2] = (K(-1, 5) * E(6, 5)) * (C(3, 1) * dx(3) + (C(2, 1) * X(5)) * dx(1));
      e[3] = (K(-1, 5) * E(6, 5)) * (C(3, 1) * dx(4) - (C(2, 1) * X(2)) * dx(5));
      e[5] = (K(-1, 5) * E(6, 5)) * (C(3, 1) * dx(6) + (C(2, 1) * X(2)) * dx(1));
      break;
  }
  ch.metric = detail::assemble_metric(ch.coframe, Expr::exp_t(-2 * m));
  return ch;
}

/// The coordinate metric written as a sum of weighted squares, as displayed
/// for each case (independent of the coframe above).
inline ExprMatrix displayed_metric(Case c, const Rational& m) {
  auto r = [](std::int64_t p, std::int64_t q) { return make_rational(p, q); };
  auto E = [&](std::int64_t p, std::int64_t q) { return Expr::exp_t(r(p, q) * m); };
  auto C = [&](std::int64_t p, std::int64_t q) { return Expr(r(p, q)); };
  auto M2 = [&](std::int64_t p, std::int64_t q) { return Expr(r(p, q) * m * m); };
  auto X = [](int i) { return Expr::x(i); };
  const Expr one(1);
  std::vector<detail::WeightedSquare> sq;
  sq.push_back({E(-2, 1), dt()});
  switch (c) {
    case Case::Abelian:
      for (int i = 1; i <= 6; ++i) sq.push_back({one, dx(i)});
      break;
    case Case::H3:
      for (int i : {2, 4, 6}) sq.push_back({one, dx(i)});
      for (int i : {1, 5}) sq.push_back({E(-2, 3), dx(i)});
      sq.push_back({M2(4, 9) * E(2, 3), dx(3) + X(5) * dx(1)});
      break;
    case Case::C12_34:
      sq.push_back({one, dx(2)});
      for (int i : {1, 4, 5, 6}) sq.push_back({E(-1, 2), dx(i)});
      sq.push_back({M2(9, 16) * E(1, 1), dx(3) + (C(2, 3) * X(5)) * dx(1) + (C(2, 3) * X(4)) * dx(6)});
      break;
    case Case::C12_13_24:
      for (int i : {1, 6}) sq.push_back({E(-2, 5), dx(i)});
      for (int i : {4, 5}) sq.push_back({E(-4, 5), dx(i)});
      sq.push_back({M2(9, 25) * E(4, 5), dx(3) - (C(2, 3) * X(1)) * dx(5) + (C(2, 3) * X(4)) * dx(6)});
      sq.push_back({M2(9, 25) * E(2, 5), dx(2) + (C(2, 3) * X(4)) * dx(5)});
      break;
    case Case::C12_13:
      sq.push_back({one, dx(1)});
      sq.push_back({M2(9, 16) * E(1, 2), dx(2) - (C(2, 3) * X(5)) * dx(4)});
      sq.push_back({M2(9, 16) * E(1, 2), dx(3) - (C(2, 3) * X(6)) * dx(4)});
      sq.push_back({E(-1, 1), dx(4)});
      for (int i : {5, 6}) sq.push_back({E(-1, 2), dx(i)});
      break;
    case Case::Iwasawa:
      sq.push_back({M2(4, 9) * E(2, 3), dx(3) + (C(1, 2) * X(5)) * dx(1) + (C(1, 2) * X(4)) * dx(6)});
      sq.push_back({M2(4, 9) * E(2, 3), dx(2) + (C(1, 2) * X(6)) * dx(1) - (C(1, 2) * X(4)) * dx(5)});
      for (int i : {1, 4, 5, 6}) sq.push_back({E(-2, 3), dx(i)});
      break;
    case Case::C12_13_23:
      for (int i : {1, 2, 5}) sq.push_back({E(-4, 5), dx(i)});
      sq.push_back({M2(9, 25) * E(2, 5), dx(3) + (C(2, 3) * X(5)) * dx(1)});
      sq.push_back({M2(9, 25) * E(2, 5), dx(4) - (C(2, 3) * X(2)) * dx(5)});
      sq.push_back({M2(9, 25) * E(2, 5), dx(6) + (C(2, 3) * X(2)) * dx(1)});
      break;
  }
  return detail::sum_of_squares(sq);
}

/// Pullback of a left-invariant form along the chart coframe.
inline ExprForm pullback(const Form& f, const Chart& ch) {
  if (f.dim() != kCoords) throw DimensionError("pullback expects a form on R^7");
  ExprForm out(kCoords, f.grade());
  for (const auto& [key, coeff] : f.terms()) {
    ExprForm term = ExprForm::constant(kCoords, Expr(coeff));
    for (int a : key.indices()) term = wedge(term, to_form(ch.coframe[a - 1]));
    out += term;
  }
  return out;
}

/// d(e^a) minus the algebra's de^a expressed through the coframe; all zero
/// iff the chart realizes the structure equations.
inline std::vector<ExprForm> structure_equation_defects(const Chart& ch, const LieAlgebra& alg) {
  std::vector<ExprForm> out;
  for (int a = 1; a <= kCoords; ++a) {
    out.push_back(exterior_derivative(to_form(ch.coframe[a - 1])) - pullback(alg.de(a), ch));
  }
  return out;
}

inline Mat7 evaluate(const ExprMatrix& g, const Point& p) {
  Mat7 out;
  for (int i = 0; i < kCoords; ++i) {
    for (int j = 0; j < kCoords; ++j) out(i, j) = g[i][j](p);
  }
  return out;
}

/// Symmetric index pair packing for 7x7.
constexpr int sym_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return i * kCoords - i * (i - 1) / 2 + (j - i);
}
inline constexpr int kSym = kCoords * (kCoords + 1) / 2;

using Christoffel = std::array<double, kCoords * kCoords * kCoords>;  // [k][i][j]
using Riemann = std::array<double, kCoords * kCoords * kCoords * kCoords>;  // [l][k][i][j]

constexpr int idx3(int a, int b, int c) { return (a * kCoords + b) * kCoords + c; }
constexpr int idx4(int a, int b, int c, int d) { return ((a * kCoords + b) * kCoords + c) * kCoords + d; }

/// Metric with cached symbolic first and second partials.
class ChartGeometry {
 public:
  explicit ChartGeometry(const Chart& ch) : chart_(ch) {
    for (int i = 0; i < kCoords; ++i) {
      for (int j = i; j < kCoords; ++j) {
        const Expr& gij = ch.metric[i][j];
        const int s = sym_index(i, j);
        g_[s] = CompiledExpr(gij);
        for (int a = 0; a < kCoords; ++a) {
          const Expr da = gij.derivative(a);
          dg_[a][s] = CompiledExpr(da);
          for (int b = a; b < kCoords; ++b) {
            const CompiledExpr dab(da.derivative(b));
            ddg_[a][b][s] = dab;
            ddg_[b][a][s] = dab;
          }
        }
      }
    }
  }

  const Chart& chart() const noexcept { return chart_; }

  Mat7 metric(const Point& p) const {
    Mat7 g;
    for (int i = 0; i < kCoords; ++i) {
      for (int j = 0; j < kCoords; ++j) g(i, j) = g_[sym_index(i, j)](p);
    }
    return g;
  }

  /// dg[a](i, j) = d_a g_ij
  std::array<Mat7, kCoords> metric_d1(const Point& p) const {
    std::array<Mat7, kCoords> out;
    for (int a = 0; a < kCoords; ++a) {
      for (int i = 0; i < kCoords; ++i) {
        for (int j = 0; j < kCoords; ++j) out[a](i, j) = dg_[a][sym_index(i, j)](p);
      }
    }
    return out;
  }

  double metric_d2(int a, int b, int i, int j, const Point& p) const { return ddg_[a][b][sym_index(i, j)](p); }

  Mat7 inverse_metric(const Point& p) const {
    const Mat7 g = metric(p);
    Eigen::LLT<Mat7> llt(g);
    if (llt.info() != Eigen::Success) throw SingularMetricError("metric is not positive definite at sample point");
    return llt.solve(Mat7::Identity());
  }

  Christoffel christoffels(const Point& p) const {
    const Mat7 gi = inverse_metric(p);
    const auto dg = metric_d1(p);
    return christoffels_from(gi, dg);
  }

  /// R^l_{kij} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik}
  Riemann riemann(const Point& p) const {
    const Mat7 gi = inverse_metric(p);
    const auto dg = metric_d1(p);
    const Christoffel G = christoffels_from(gi, dg);
    // d_a G^k_{ij} = -g^{kq} d_a g_{qr} G^r_{ij} + 1/2 g^{kl} (d_a d_i g_{lj} + d_a d_j g_{li} - d_a d_l g_{ij})
    std::array<Christoffel, kCoords> dG;
    for (int a = 0; a < kCoords; ++a) {
      Christoffel& out = dG[a];
      out.fill(0.0);
      for (int i = 0; i < kCoords; ++i) {
        for (int j = i; j < kCoords; ++j) {
          std::array<double, kCoords> low{};  // lowered: 1/2(...)_l
          for (int l = 0; l < kCoords; ++l) {
            low[l] = 0.5 * (metric_d2(a, i, l, j, p) + metric_d2(a, j, l, i, p) - metric_d2(a, l, i, j, p));
          }
          std::array<double, kCoords> corr{};  // d_a g_{qr} G^r_{ij}
          for (int q = 0; q < kCoords; ++q) {
            double s = 0.0;
            for (int rr = 0; rr < kCoords; ++rr) s += dg[a](q, rr) * G[idx3(rr, i, j)];
            corr[q] = s;
          }
          for (int k = 0; k < kCoords; ++k) {
            double s = 0.0;
            for (int l = 0; l < kCoords; ++l) s += gi(k, l) * (low[l] - corr[l]);
            out[idx3(k, i, j)] = s;
            out[idx3(k, j, i)] = s;
          }
        }
      }
    }
    Riemann R;
    for (int l = 0; l < kCoords; ++l) {
      for (int k = 0; k < kCoords; ++k) {
        for (int i = 0; i < kCoords; ++i) {
          for (int j = 0; j < kCoords; ++j) {
            double v = dG[i][idx3(l, j, k)] - dG[j][idx3(l, i, k)];
            for (int mm = 0; mm < kCoords; ++mm) {
              v += G[idx3(l, i, mm)] * G[idx3(mm, j, k)] - G[idx3(l, j, mm)] * G[idx3(mm, i, k)];
            }
            R[idx4(l, k, i, j)] = v;
          }
        }
      }
    }
    return R;
  }

  /// Ric_{kj} = R^i_{kij}
  Mat7 ricci(const Point& p) const { return ricci_from(riemann(p)); }

  static Mat7 ricci_from(const Riemann& R) {
    Mat7 ric = Mat7::Zero();
    for (int k = 0; k < kCoords; ++k) {
      for (int j = 0; j < kCoords; ++j) {
        double s = 0.0;
        for (int i = 0; i < kCoords; ++i) s += R[idx4(i, k, i, j)];
        ric(k, j) = s;
      }
    }
    return ric;
  }

 private:
  static Christoffel christoffels_from(const Mat7& gi, const std::array<Mat7, kCoords>& dg) {
    Christoffel G;
    for (int i = 0; i < kCoords; ++i) {
      for (int j = i; j < kCoords; ++j) {
        std::array<double, kCoords> low{};
        for (int l = 0; l < kCoords; ++l) low[l] = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        for (int k = 0; k < kCoords; ++k) {
          double s = 0.0;
          for (int l = 0; l < kCoords; ++l) s += gi(k, l) * low[l];
          G[idx3(k, i, j)] = s;
          G[idx3(k, j, i)] = s;
        }
      }
    }
    return G;
  }

  Chart chart_;
  std::array<CompiledExpr, kSym> g_;
  std::array<std::array<CompiledExpr, kSym>, kCoords> dg_;
  std::array<std::array<std::array<CompiledExpr, kSym>, kCoords>, kCoords> ddg_;
};

/// Metric entries and their (i, j) second partial evaluated with hyper-dual
/// numbers, independent of the symbolic derivative cache.
inline std::array<std::array<Jet2, kCoords>, kCoords> metric_jet(const Chart& ch, const Point& p, int i, int j) {
  const auto s = seed(p, i, j);
  std::array<std::array<Jet2, kCoords>, kCoords> out;
  for (int a = 0; a < kCoords; ++a) {
    for (int b = 0; b < kCoords; ++b) out[a][b] = ch.metric[a][b].eval<Jet2>(s);
  }
  return out;
}

/// max |d_k g_ij - G^l_{ki} g_lj - G^l_{kj} g_il|
inline double metricity_residual(const ChartGeometry& geo, const Point& p) {
  const Mat7 g = geo.metric(p);
  const auto dg = geo.metric_d1(p);
  const Christoffel G = geo.christoffels(p);
  double worst = 0.0;
  for (int k = 0; k < kCoords; ++k) {
    for (int i = 0; i < kCoords; ++i) {
      for (int j = 0; j < kCoords; ++j) {
        double v = dg[k](i, j);
        for (int l = 0; l < kCoords; ++l) v -= G[idx3(l, k, i)] * g(l, j) + G[idx3(l, k, j)] * g(i, l);
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return worst;
}

struct RiemannSymmetryResiduals {
  double antisym_first = 0.0;   // R_{ijkl} + R_{jikl}
  double antisym_second = 0.0;  // R_{ijkl} + R_{ijlk}
  double pair = 0.0;            // R_{ijkl} - R_{klij}
  double bianchi = 0.0;         // R_{ijkl} + R_{iklj} + R_{iljk}
};

inline RiemannSymmetryResiduals riemann_symmetries(const ChartGeometry& geo, const Point& p) {
  const Mat7 g = geo.metric(p);
  const Riemann R = geo.riemann(p);
  // lower the first index: R_{lkij} = g_{la} R^a_{kij}
  Riemann low;
  for (int l = 0; l < kCoords; ++l) {
    for (int k = 0; k < kCoords; ++k) {
      for (int i = 0; i < kCoords; ++i) {
        for (int j = 0; j < kCoords; ++j) {
          double s = 0.0;
          for (int a = 0; a < kCoords; ++a) s += g(l, a) * R[idx4(a, k, i, j)];
          low[idx4(l, k, i, j)] = s;
        }
      }
    }
  }
  RiemannSymmetryResiduals r;
  for (int a = 0; a < kCoords; ++a) {
    for (int b = 0; b < kCoords; ++b) {
      for (int c = 0; c < kCoords; ++c) {
        for (int d = 0; d < kCoords; ++d) {
          const double v = low[idx4(a, b, c, d)];
          r.antisym_first = std::max(r.antisym_first, std::abs(v + low[idx4(b, a, c, d)]));
          r.antisym_second = std::max(r.antisym_second, std::abs(v + low[idx4(a, b, d, c)]));
          r.pair = std::max(r.pair, std::abs(v - low[idx4(c, d, a, b)]));
          r.bianchi = std::max(r.bianchi, std::abs(v + low[idx4(a, c, d, b)] + low[idx4(a, d, b, c)]));
        }
      }
    }
  }
  return r;
}

struct HolonomyResult {
  int dimension = 0;
  bool stable = true;
  double worst_gap = 0.0;  // smallest retained/discarded singular value ratio seen
  std::vector<double> singular_values;  // final span, normalized by the largest
};

namespace detail {

using SkewBasis = std::vector<Mat7>;

struct SpanResult {
  SkewBasis basis;
  std::vector<double> sv;
  bool stable = true;
  double gap = 0.0;
};

/// Orthonormal basis of span(mats) via SVD; rank from relative threshold.
inline SpanResult span_basis(const std::vector<Mat7>& mats, double tol) {
  SpanResult out;
  out.gap = std::numeric_limits<double>::infinity();
  if (mats.empty()) return out;
  Eigen::MatrixXd A(kCoords * kCoords, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t c = 0; c < mats.size(); ++c) {
    A.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXd>(mats[c].data(), kCoords * kCoords);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out.sv.push_back(s(i) / s(0));
    if (s(i) / s(0) > tol) ++r;
  }
  const double last_kept = out.sv[r - 1];
  const double first_dropped = (r < static_cast<int>(out.sv.size())) ? out.sv[r] : 0.0;
  out.stable = last_kept >= 10.0 * tol && first_dropped <= tol / 10.0;
  out.gap = first_dropped > 0.0 ? last_kept / first_dropped : std::numeric_limits<double>::infinity();
  for (int i = 0; i < r; ++i) {
    Mat7 b;
    Eigen::Map<Eigen::VectorXd>(b.data(), kCoords * kCoords) = svd.matrixU().col(i);
    out.basis.push_back(b);
  }
  return out;
}

}  // namespace detail

/// Curvature operators R(e_a, e_b) in a g-orthonormal frame at p.
inline std::vector<Mat7> curvature_operators(const ChartGeometry& geo, const Point& p) {
  const Mat7 g = geo.metric(p);
  Eigen::LLT<Mat7> llt(g);
  if (llt.info() != Eigen::Success) throw SingularMetricError("metric is not positive definite");
  const Mat7 L = llt.matrixL();
  const Mat7 F = L.transpose().inverse();  // columns: orthonormal frame vectors
  const Mat7 Lt = L.transpose();            // coframe: Lt * F = I
  const Riemann R = geo.riemann(p);
  std::vector<Mat7> ops;
  for (int a = 0; a < kCoords; ++a) {
    for (int b = a + 1; b < kCoords; ++b) {
      // (R_ab)^mu_nu = R^mu_{nu rho sigma} F^rho_a F^sigma_b
      Mat7 coord = Mat7::Zero();
      for (int mu = 0; mu < kCoords; ++mu) {
        for (int nu = 0; nu < kCoords; ++nu) {
          double s = 0.0;
          for (int rho = 0; rho < kCoords; ++rho) {
            for (int sg = 0; sg < kCoords; ++sg) s += R[idx4(mu, nu, rho, sg)] * F(rho, a) * F(sg, b);
          }
          coord(mu, nu) = s;
        }
      }
      ops.push_back(Lt * coord * F);
    }
  }
  return ops;
}

/// Dimension of the matrix Lie algebra generated by the curvature operators
/// at p (closure under commutators).
inline HolonomyResult holonomy_lower_bound(const ChartGeometry& geo, const Point& p, double tol) {
  HolonomyResult res;
  res.worst_gap = std::numeric_limits<double>::infinity();
  detail::SpanResult span = detail::span_basis(curvature_operators(geo, p), tol);
  res.stable = span.stable;
  res.worst_gap = std::min(res.worst_gap, span.gap);
  for (int iter = 0; iter < 64; ++iter) {
    std::vector<Mat7> gens = span.basis;
    for (std::size_t i = 0; i < span.basis.size(); ++i) {
      for (std::size_t j = i + 1; j < span.basis.size(); ++j) {
        gens.push_back(span.basis[i] * span.basis[j] - span.basis[j] * span.basis[i]);
      }
    }
    detail::SpanResult next = detail::span_basis(gens, tol);
    res.stable = res.stable && next.stable;
    res.worst_gap = std::min(res.worst_gap, next.gap);
    const bool done = next.basis.size() == span.basis.size();
    span = std::move(next);
    if (done) break;
  }
  res.dimension = static_cast<int>(span.basis.size());
  res.singular_values = span.sv;
  return res;
}

/// max over components of |nabla_mu w_{i1..ik}| for a k-form with Expr
/// coefficients in coordinates.
inline double parallel_form_residual(const ChartGeometry& geo, const ExprForm& w, const Point& p) {
  if (w.is_zero()) return 0.0;
  if (!w.is_homogeneous()) throw GradeError("parallel residual needs a homogeneous form");
  const int k = w.grade();
  const Christoffel G = geo.christoffels(p);
  std::map<MultiIndex, double> val;
  std::map<MultiIndex, std::array<double, kCoords>> dval;
  for (const auto& [key, c] : w.terms()) {
    val[key] = c(p);
    std::array<double, kCoords> d{};
    for (int mu = 0; mu < kCoords; ++mu) d[mu] = c.derivative(mu)(p);
    dval[key] = d;
  }
  auto component = [&](const std::vector<int>& idx) {
    auto [key, sign] = canonicalize(idx);
    if (sign == 0) return 0.0;
    auto it = val.find(key);
    return it == val.end() ? 0.0 : sign * it->second;
  };
  double worst = 0.0;
  for (std::uint32_t bits = 0; bits < (1U << kCoords); ++bits) {
    if (std::popcount(bits) != k) continue;
    const MultiIndex key = MultiIndex::from_bits(bits);
    const std::vector<int> idx = key.indices();  // 1-based
    for (int mu = 0; mu < kCoords; ++mu) {
      double v = 0.0;
      if (auto it = dval.find(key); it != dval.end()) v = it->second[mu];
      for (int s = 0; s < k; ++s) {
        std::vector<int> sub = idx;
        for (int l = 0; l < kCoords; ++l) {
          const double gamma = G[idx3(l, mu, idx[s] - 1)];
          if (gamma == 0.0) continue;
          sub[s] = l + 1;
          v -= gamma * component(sub);
        }
      }
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

/// exp(-3mt) phi pulled back to coordinates: the parallel 3-form of g.
inline ExprForm conformal_phi(const Chart& ch, const Form& phi) {
  ExprForm f = pullback(phi, ch);
  return f * Expr::exp_t(-3 * ch.m);
}

/// (L_V g)_{ij} = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k, symbolically.
inline ExprMatrix lie_derivative_metric(const Chart& ch, const VectorField& V) {
  ExprMatrix out;
  for (int i = 0; i < kCoords; ++i) {
    for (int j = i; j < kCoords; ++j) {
      Expr s;
      for (int k = 0; k < kCoords; ++k) {
        s += V[k] * ch.metric[i][j].derivative(k);
        s += ch.metric[k][j] * V[k].derivative(i);
        s += ch.metric[i][k] * V[k].derivative(j);
      }
      out[i][j] = s;
      out[j][i] = s;
    }
  }
  return out;
}

inline Mat7 lie_derivative_metric(const Chart& ch, const VectorField& V, const Point& p) {
  return evaluate(lie_derivative_metric(ch, V), p);
}

struct HomothetyResult {
  bool homothetic = false;
  double c = 0.0;
  double max_residual = 0.0;
};

/// c from the first point (Frobenius projection of L_V g on g), then
/// max |L_V g - c g| over all points.
inline HomothetyResult homothety_check(const Chart& ch, const VectorField& V, const std::vector<Point>& points,
                                       double tol = 1e-7) {
  HomothetyResult r;
  if (points.empty()) return r;
  const ExprMatrix L = lie_derivative_metric(ch, V);
  {
    const Mat7 l0 = evaluate(L, points.front());
    const Mat7 g0 = evaluate(ch.metric, points.front());
    r.c = (l0.cwiseProduct(g0)).sum() / (g0.cwiseProduct(g0)).sum();
  }
  for (const auto& p : points) {
    const Mat7 d = evaluate(L, p) - r.c * evaluate(ch.metric, p);
    r.max_residual = std::max(r.max_residual, d.cwiseAbs().maxCoeff());
  }
  r.homothetic = r.max_residual <= tol;
  return r;
}

/// Z as displayed for the (12,13+24) metric.
inline VectorField displayed_homothety_field(const Rational& m) {
  VectorField Z;
  Z[kT] = Expr(Rational(-5) / m);
  Z[0] = Expr(4) * Expr::x(1);
  Z[5] = Expr(4) * Expr::x(6);
  Z[3] = Expr(3) * Expr::x(4);
  Z[4] = Expr(3) * Expr::x(5);
  Z[2] = Expr(make_rational(21, 5) * m) * Expr::x(3);
  Z[1] = Expr(make_rational(18, 5) * m) * Expr::x(2);
  return Z;
}

/// The m-independent scaling field of the (12,13+24) metric; L_Z g = 10 g.
inline VectorField homothety_field(const Rational& m) {
  VectorField Z = displayed_homothety_field(m);
  Z[2] = Expr(7) * Expr::x(3);
  Z[1] = Expr(6) * Expr::x(2);
  return Z;
}

/// (dZ^flat)(d_a, d_b) = d_a Z_b - d_b Z_a with Z_mu = g_{mu nu} Z^nu.
inline Expr d_flat(const Chart& ch, const VectorField& Z, int a, int b) {
  auto lower = [&](int mu) {
    Expr s;
    for (int nu = 0; nu < kCoords; ++nu) s += ch.metric[mu][nu] * Z[nu];
    return s;
  };
  return lower(b).derivative(a) - lower(a).derivative(b);
}

/// Seeded uniform samples in x_i in [-1, 1], t in [-1/2, 1/2].
inline std::vector<Point> sample_points(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    Point p;
    // Raw 53-bit draws keep samples identical across standard libraries.
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 6; ++i) p[i] = -1.0 + 2.0 * unit();
    p[kT] = -0.5 + unit();
    out.push_back(p);
  }
  return out;
}

inline double max_abs(const Mat7& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace g2cert
