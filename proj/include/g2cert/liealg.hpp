#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "g2cert/exact_linalg.hpp"
#include "g2cert/exterior.hpp"

namespace g2cert {

/// A Lie algebra presented by the differentials de^1..de^n of its dual basis.
/// Brackets follow [e_j,e_k]^i = -de^i(e_j,e_k).
class LieAlgebra {
 public:
  LieAlgebra() = default;

  LieAlgebra(std::string name, std::vector<Form> differentials, std::optional<Rational> m = std::nullopt)
      : name_(std::move(name)), de_(std::move(differentials)), m_(std::move(m)) {
    const int n = dim();
    for (auto& f : de_) {
      if (f.dim() != n) throw DimensionError("differential has wrong ambient dimension");
      if (!f.is_zero() && f.grade() != 2) throw GradeError("differential of a generator must be a 2-form");
    }
  }

  /// The abelian algebra of dimension n.
  static LieAlgebra abelian(int n, std::string name = "abelian") {
    std::vector<Form> de;
    for (int i = 0; i < n; ++i) de.emplace_back(n, 2);
    return LieAlgebra(std::move(name), std::move(de));
  }

  int dim() const noexcept { return static_cast<int>(de_.size()); }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Form>& differentials() const noexcept { return de_; }
  const Form& de(int i) const { return de_.at(i - 1); }
  const std::optional<Rational>& m() const noexcept { return m_; }

  /// Component i of [e_j, e_k] (all 1-based).
  Rational structure_constant(int i, int j, int k) const {
    if (j == k) return Rational(0);
    const Rational a = de(i).coefficient(MultiIndex::from_bits(MultiIndex::bit(j) | MultiIndex::bit(k)));
    return j < k ? Rational(-a) : a;
  }

  RVector bracket(const RVector& x, const RVector& y) const {
    const int n = dim();
    RVector out(n);
    for (int i = 1; i <= n; ++i) {
      for (const auto& [key, coeff] : de(i).terms()) {
        const auto idx = key.indices();
        const int j = idx[0];
        const int k = idx[1];
        const Rational w = x[j - 1] * y[k - 1] - x[k - 1] * y[j - 1];
        if (w != 0) out[i - 1] -= coeff * w;
      }
    }
    return out;
  }

  /// Matrix of ad_{e_k}: column j holds [e_k, e_j].
  RMatrix ad(int k) const {
    const int n = dim();
    RMatrix out(n, n);
    for (int j = 1; j <= n; ++j) {
      for (int i = 1; i <= n; ++i) out(i - 1, j - 1) = structure_constant(i, k, j);
    }
    return out;
  }

 private:
  std::string name_;
  std::vector<Form> de_;
  std::optional<Rational> m_;
};

/// Graded Leibniz extension of generator differentials to arbitrary forms.
template <class T>
BasicForm<T> ce_differential(const std::vector<BasicForm<T>>& de, const BasicForm<T>& a) {
  const int n = static_cast<int>(de.size());
  if (a.dim() != n) throw DimensionError("form dimension does not match the algebra");
  BasicForm<T> out(n, a.is_homogeneous() && a.grade() < n ? a.grade() + 1 : BasicForm<T>::kMixed);
  for (const auto& [key, coeff] : a.terms()) {
    std::uint32_t left = 0;
    int pos = 0;
    for (std::uint32_t rest = key.bits(); rest != 0; rest &= rest - 1, ++pos) {
      const int idx = std::countr_zero(rest) + 1;
      const std::uint32_t here = MultiIndex::bit(idx);
      const std::uint32_t right = key.bits() & ~(left | here);
      const int outer = (pos % 2 == 0) ? 1 : -1;
      for (const auto& [dk, dv] : de[idx - 1].terms()) {
        if ((dk.bits() & (left | right)) != 0) continue;
        const int s1 = wedge_sign(MultiIndex::from_bits(left), dk);
        const int s2 = wedge_sign(MultiIndex::from_bits(left | dk.bits()), MultiIndex::from_bits(right));
        const int sign = outer * s1 * s2;
        const T prod = coeff * dv;
        out.add_term(MultiIndex::from_bits(left | dk.bits() | right), sign > 0 ? prod : -prod);
      }
      left |= here;
    }
  }
  return out;
}

inline Form ce_differential(const LieAlgebra& alg, const Form& a) { return ce_differential(alg.differentials(), a); }

template <class T>
std::vector<BasicForm<T>> lift_differentials(const LieAlgebra& alg) {
  std::vector<BasicForm<T>> out;
  out.reserve(alg.dim());
  for (const auto& f : alg.differentials()) out.push_back(lift_form<T>(f));
  return out;
}

/// d(de^i) for every generator; the algebra satisfies Jacobi iff all vanish.
inline std::vector<Form> jacobi_check(const LieAlgebra& alg) {
  std::vector<Form> out;
  out.reserve(alg.dim());
  for (const auto& f : alg.differentials()) out.push_back(ce_differential(alg, f));
  return out;
}

inline bool is_lie_algebra(const LieAlgebra& alg) {
  for (const auto& f : jacobi_check(alg)) {
    if (!f.is_zero()) return false;
  }
  return true;
}

/// Independent check on basis triples using the recovered brackets.
inline bool jacobi_identity_on_triples(const LieAlgebra& alg) {
  const int n = alg.dim();
  auto unit = [n](int i) {
    RVector v(n);
    v[i - 1] = 1;
    return v;
  };
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      for (int c = b + 1; c <= n; ++c) {
        const RVector ea = unit(a), eb = unit(b), ec = unit(c);
        RVector sum = alg.bracket(alg.bracket(ea, eb), ec);
        const RVector t2 = alg.bracket(alg.bracket(eb, ec), ea);
        const RVector t3 = alg.bracket(alg.bracket(ec, ea), eb);
        for (int i = 0; i < n; ++i) {
          if (sum[i] + t2[i] + t3[i] != 0) return false;
        }
      }
    }
  }
  return true;
}

/// Rank-one solvable extension s = n + R e_7 with de^j = d^e^j + c_j e^{j7}.
struct Extension {
  LieAlgebra base;
  std::vector<Rational> c;
  LieAlgebra algebra;

  const std::optional<Rational>& m() const noexcept { return base.m(); }
};

inline Extension rank_one_extension(const LieAlgebra& base, std::vector<Rational> c, std::string name = {}) {
  const int n = base.dim();
  if (static_cast<int>(c.size()) != n) throw DimensionError("eigenvalue vector length differs from base dimension");
  for (const auto& cj : c) {
    if (cj == 0) throw SingularDerivationError("derivation eigenvalue is zero");
  }
  std::vector<Form> de;
  de.reserve(n + 1);
  for (int j = 1; j <= n; ++j) {
    Form f = embed(base.de(j), n + 1);
    f.add_term(MultiIndex({j, n + 1}), c[j - 1]);
    de.push_back(std::move(f));
  }
  de.emplace_back(n + 1, 2);
  if (name.empty()) name = base.name();
  LieAlgebra alg(std::move(name), std::move(de), base.m());
  return Extension{base, std::move(c), std::move(alg)};
}

/// Number of nonzero terms in the lower central series; throws if it stalls.
inline int step_length(const LieAlgebra& alg) {
  const int n = alg.dim();
  std::vector<RVector> basis;
  for (int i = 0; i < n; ++i) {
    RVector v(n);
    v[i] = 1;
    basis.push_back(std::move(v));
  }
  int steps = 0;
  std::vector<RVector> current = basis;
  while (!current.empty()) {
    ++steps;
    std::vector<RVector> next;
    for (const auto& x : basis) {
      for (const auto& y : current) next.push_back(alg.bracket(x, y));
    }
    next = row_reduce(std::move(next));
    if (next.size() == current.size()) throw NotNilpotentError("lower central series does not terminate");
    current = std::move(next);
  }
  return steps;
}

/// dim ker(d : Lambda^1 -> Lambda^2).
inline int betti1(const LieAlgebra& alg) {
  const int n = alg.dim();
  std::vector<MultiIndex> keys;
  for (const auto& f : alg.differentials()) {
    for (const auto& [k, v] : f.terms()) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<RVector> rows;
  for (const auto& f : alg.differentials()) {
    RVector r(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) r[i] = f.coefficient(keys[i]);
    rows.push_back(std::move(r));
  }
  return n - (keys.empty() ? 0 : rank(std::move(rows)));
}

/// Multiset of c_j/m, sorted by decreasing value (so the smallest |c/m| comes
/// first when m < 0).
inline std::vector<std::pair<Rational, int>> eigenvalue_type(const Extension& ext) {
  if (!ext.m() || *ext.m() == 0) throw std::invalid_argument("eigenvalue type needs a nonzero m");
  std::vector<Rational> ratios;
  for (const auto& cj : ext.c) ratios.push_back(cj / *ext.m());
  std::sort(ratios.begin(), ratios.end(), std::greater<>());
  std::vector<std::pair<Rational, int>> out;
  for (const auto& r : ratios) {
    if (!out.empty() && out.back().first == r) {
      ++out.back().second;
    } else {
      out.emplace_back(r, 1);
    }
  }
  return out;
}

/// J e1 = e4, J e2 = -e3, J e5 = e6 on R^6; column j holds J e_j.
inline RMatrix standard_complex_structure() {
  RMatrix j(6, 6);
  auto set = [&](int to, int from, int v) { j(to - 1, from - 1) = v; };
  set(4, 1, 1);
  set(1, 4, -1);
  set(3, 2, -1);
  set(2, 3, 1);
  set(6, 5, 1);
  set(5, 6, -1);
  return j;
}

/// Components N^i_{jk} (0-based, flattened as [i][j][k]) of
/// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y].
inline std::vector<Rational> nijenhuis(const LieAlgebra& alg, const RMatrix& J) {
  const int n = alg.dim();
  if (J.rows != n || J.cols != n) throw DimensionError("almost complex structure has wrong size");
  if (!(J * J == RMatrix(n, n) - RMatrix::identity(n))) throw NotAlmostComplexError("J^2 != -1");
  auto column = [&](int j) {
    RVector v(n);
    for (int i = 0; i < n; ++i) v[i] = J(i, j);
    return v;
  };
  std::vector<Rational> out(static_cast<std::size_t>(n) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      RVector ej(n), ek(n);
      ej[j] = 1;
      ek[k] = 1;
      const RVector Jj = column(j), Jk = column(k);
      const RVector a = alg.bracket(Jj, Jk);
      const RVector b = J.apply(alg.bracket(Jj, ek));
      const RVector c = J.apply(alg.bracket(ej, Jk));
      const RVector d = alg.bracket(ej, ek);
      for (int i = 0; i < n; ++i) {
        out[(static_cast<std::size_t>(i) * n + j) * n + k] = a[i] - b[i] - c[i] - d[i];
      }
    }
  }
  return out;
}

inline bool is_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

/// ad_{e_7} restricted to the base, as a matrix (diagonal for a catalog extension).
inline RMatrix derivation_matrix(const Extension& ext) {
  const int n = ext.base.dim();
  const RMatrix full = ext.algebra.ad(n + 1);
  RMatrix d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d(i, j) = full(i, j);
  }
  return d;
}

inline bool is_diagonal(const RMatrix& m) {
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (i != j && m(i, j) != 0) return false;
    }
  }
  return true;
}

/// (DJ)^2 - (JD)^2 for D = ad_{e_7}|base and the given J.
inline RMatrix dj_jd_defect(const Extension& ext, const RMatrix& J) {
  const RMatrix D = derivation_matrix(ext);
  const RMatrix dj = D * J;
  const RMatrix jd = J * D;
  return dj * dj - jd * jd;
}

}  // namespace g2cert
