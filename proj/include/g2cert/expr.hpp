#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "g2cert/exterior.hpp"
#include "g2cert/rational.hpp"

namespace g2cert {

/// Number of coordinates: x1..x6 are variables 0..5, t is variable 6.
inline constexpr int kCoords = 7;
inline constexpr int kT = 6;

using Point = std::array<double, kCoords>;

/// Closed-form scalar on R^7: a finite sum of
///   q * x1^p1 ... x6^p6 * t^k * exp(r t)
/// with rational q, r and nonnegative integer powers. Closed under partial
/// derivatives, sums and products.
class Expr {
 public:
  struct Monomial {
    std::array<int, kCoords> pow{};
    Rational rate;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend bool operator<(const Monomial& a, const Monomial& b) {
      if (a.pow != b.pow) return a.pow < b.pow;
      return a.rate < b.rate;
    }
  };
  using TermMap = std::map<Monomial, Rational>;

  Expr() = default;
  Expr(const Rational& c) { add(Monomial{}, c); }  // NOLINT(google-explicit-constructor)
  Expr(int c) : Expr(Rational(c)) {}              // NOLINT(google-explicit-constructor)

  /// Coordinate variable (0-based; kT is t).
  static Expr var(int i) {
    Expr e;
    Monomial mo;
    mo.pow[i] = 1;
    e.add(mo, Rational(1));
    return e;
  }
  static Expr x(int i) { return var(i - 1); }
  static Expr t() { return var(kT); }

  /// exp(rate * t)
  static Expr exp_t(const Rational& rate) {
    Expr e;
    Monomial mo;
    mo.rate = rate;
    e.add(mo, Rational(1));
    return e;
  }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
  }

  Expr derivative(int var) const {
    Expr out;
    for (const auto& [mo, c] : terms_) {
      if (mo.pow[var] > 0) {
        Monomial d = mo;
        d.pow[var] -= 1;
        out.add(d, c * mo.pow[var]);
      }
      if (var == kT && mo.rate != 0) out.add(mo, c * mo.rate);
    }
    return out;
  }

  /// Generic evaluation; S needs +, *, construction from double and exp(S).
  template <class S>
  S eval(const std::array<S, kCoords>& p) const {
    using std::exp;
    S acc(0.0);
    for (const auto& [mo, c] : terms_) {
      S term(to_double(c));
      for (int i = 0; i < kCoords; ++i) {
        for (int k = 0; k < mo.pow[i]; ++k) term = term * p[i];
      }
      if (mo.rate != 0) term = term * exp(p[kT] * to_double(mo.rate));
      acc = acc + term;
    }
    return acc;
  }

  double operator()(const Point& p) const { return eval<double>(p); }

  Expr& operator+=(const Expr& o) {
    for (const auto& [mo, c] : o.terms_) add(mo, c);
    return *this;
  }
  Expr& operator-=(const Expr& o) {
    for (const auto& [mo, c] : o.terms_) add(mo, -c);
    return *this;
  }

  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator-(Expr a) {
    for (auto& [mo, c] : a.terms_) c = -c;
    return a;
  }

  friend Expr operator*(const Expr& a, const Expr& b) {
    Expr out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial mo;
        for (int i = 0; i < kCoords; ++i) mo.pow[i] = ma.pow[i] + mb.pow[i];
        mo.rate = ma.rate + mb.rate;
        out.add(mo, ca * cb);
      }
    }
    return out;
  }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mo, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << to_string(c) << ")";
      static const char* names[] = {"x1", "x2", "x3", "x4", "x5", "x6", "t"};
      for (int i = 0; i < kCoords; ++i) {
        if (mo.pow[i] == 1) os << "*" << names[i];
        if (mo.pow[i] > 1) os << "*" << names[i] << "^" << mo.pow[i];
      }
      if (mo.rate != 0) os << "*exp(" << to_string(mo.rate) << " t)";
    }
    return os.str();
  }

 private:
  void add(const Monomial& mo, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(mo, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  TermMap terms_;
};

template <>
struct CoefficientTraits<Expr> {
  static Expr from_rational(const Rational& r) { return Expr(r); }
  static bool is_zero(const Expr& e) { return e.is_zero(); }
};

using ExprForm = BasicForm<Expr>;

/// Flattened floating-point copy of an Expr for repeated evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e) {
    for (const auto& [mo, c] : e.terms()) terms_.push_back({to_double(c), mo.pow, to_double(mo.rate)});
  }

  double operator()(const Point& p) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff;
      for (int i = 0; i < kCoords; ++i) {
        for (int k = 0; k < t.pow[i]; ++k) v *= p[i];
      }
      if (t.rate != 0.0) v *= std::exp(t.rate * p[kT]);
      acc += v;
    }
    return acc;
  }

 private:
  struct Term {
    double coeff;
    std::array<int, kCoords> pow;
    double rate;
  };
  std::vector<Term> terms_;
};

/// Hyper-dual number f + f_a e1 + f_b e2 + f_ab e1 e2 with e1^2 = e2^2 = 0.
/// Seeding two coordinates with e1 and e2 yields exact first and mixed second
/// partials.
struct Jet2 {
  double v = 0.0;
  double a = 0.0;
  double b = 0.0;
  double ab = 0.0;

  Jet2() = default;
  Jet2(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  Jet2(double value, double da, double db, double dab) : v(value), a(da), b(db), ab(dab) {}

  friend Jet2 operator+(const Jet2& x, const Jet2& y) { return {x.v + y.v, x.a + y.a, x.b + y.b, x.ab + y.ab}; }
  friend Jet2 operator-(const Jet2& x, const Jet2& y) { return {x.v - y.v, x.a - y.a, x.b - y.b, x.ab - y.ab}; }
  friend Jet2 operator-(const Jet2& x) { return {-x.v, -x.a, -x.b, -x.ab}; }
  friend Jet2 operator*(const Jet2& x, const Jet2& y) {
    return {x.v * y.v, x.a * y.v + x.v * y.a, x.b * y.v + x.v * y.b,
            x.ab * y.v + x.a * y.b + x.b * y.a + x.v * y.ab};
  }
  friend Jet2 operator*(const Jet2& x, double s) { return {x.v * s, x.a * s, x.b * s, x.ab * s}; }
  friend Jet2 operator*(double s, const Jet2& x) { return x * s; }
  friend Jet2 operator/(const Jet2& x, const Jet2& y) {
    const double inv = 1.0 / y.v;
    const Jet2 r{inv, -y.a * inv * inv, -y.b * inv * inv, (2.0 * y.a * y.b * inv - y.ab) * inv * inv};
    return x * r;
  }
  friend Jet2 exp(const Jet2& x) {
    const double e = std::exp(x.v);
    return {e, e * x.a, e * x.b, e * (x.ab + x.a * x.b)};
  }
  friend Jet2 sqrt(const Jet2& x) {
    const double s = std::sqrt(x.v);
    const double d1 = 0.5 / s;
    const double d2 = -0.25 / (s * x.v);
    return {s, d1 * x.a, d1 * x.b, d1 * x.ab + d2 * x.a * x.b};
  }
};

/// Seeds point p with directions i (e1) and j (e2).
inline std::array<Jet2, kCoords> seed(const Point& p, int i, int j) {
  std::array<Jet2, kCoords> out;
  for (int k = 0; k < kCoords; ++k) out[k] = Jet2(p[k]);
  out[i].a = 1.0;
  out[j].b = 1.0;
  return out;
}

}  // namespace g2cert
