#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "g2cert/errors.hpp"
#include "g2cert/rational.hpp"

namespace g2cert {

/// A strictly increasing tuple of 1-based basis indices, stored as a bitmask.
/// Ordering is lexicographic on the tuple, which is the order used for
/// serialization.
class MultiIndex {
 public:
  static constexpr int kMaxIndex = 31;

  constexpr MultiIndex() noexcept = default;

  MultiIndex(std::initializer_list<int> idx) : MultiIndex(std::span<const int>(idx.begin(), idx.size())) {}

  explicit MultiIndex(std::span<const int> idx) {
    int prev = 0;
    for (int i : idx) {
      if (i <= prev || i > kMaxIndex) {
        throw std::invalid_argument("MultiIndex requires strictly increasing indices in 1..31");
      }
      bits_ |= bit(i);
      prev = i;
    }
  }

  static constexpr MultiIndex from_bits(std::uint32_t bits) noexcept {
    MultiIndex m;
    m.bits_ = bits;
    return m;
  }

  static constexpr std::uint32_t bit(int i) noexcept { return std::uint32_t{1} << (i - 1); }

  constexpr int size() const noexcept { return std::popcount(bits_); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint32_t bits() const noexcept { return bits_; }
  constexpr bool contains(int i) const noexcept { return (bits_ & bit(i)) != 0; }
  constexpr int max_index() const noexcept { return 32 - std::countl_zero(bits_); }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  friend constexpr bool operator==(MultiIndex a, MultiIndex b) noexcept { return a.bits_ == b.bits_; }

  friend constexpr std::strong_ordering operator<=>(MultiIndex a, MultiIndex b) noexcept {
    if (a.bits_ == b.bits_) return std::strong_ordering::equal;
    const std::uint32_t diff = a.bits_ ^ b.bits_;
    const int p = std::countr_zero(diff);
    // Below bit p the tuples agree. The one holding element p+1 is smaller,
    // unless the other one has already ended (it is then a proper prefix).
    const bool a_has = (a.bits_ >> p) & 1U;
    const std::uint32_t other = a_has ? b.bits_ : a.bits_;
    const bool other_ended = (other >> p) == 0;
    const bool a_less = a_has ? !other_ended : other_ended;
    return a_less ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  std::uint32_t bits_ = 0;
};

/// Sign of e^A ^ e^B relative to the sorted monomial e^{A u B}; zero when the
/// index sets overlap.
constexpr int wedge_sign(MultiIndex a, MultiIndex b) noexcept {
  if ((a.bits() & b.bits()) != 0) return 0;
  int inversions = 0;
  for (std::uint32_t rest = b.bits(); rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);  // element j+1 of B
    const std::uint32_t above = (j >= 31) ? 0U : (a.bits() >> (j + 1));
    inversions += std::popcount(above);
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

/// Sorts an arbitrary index tuple by adjacent transpositions. Returns the
/// canonical monomial and the permutation sign, or sign 0 on a repeated index.
inline std::pair<MultiIndex, int> canonicalize(std::span<const int> idx) {
  std::vector<int> v(idx.begin(), idx.end());
  int sign = 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j + 1 < v.size() - i; ++j) {
      if (v[j] > v[j + 1]) {
        std::swap(v[j], v[j + 1]);
        sign = -sign;
      }
    }
  }
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] == v[i + 1]) return {MultiIndex{}, 0};
  }
  return {MultiIndex(std::span<const int>(v)), sign};
}

/// Volume orientation: vol = sign * e^{1...n}.
struct Orientation {
  int sign = +1;
  friend bool operator==(Orientation, Orientation) = default;
};

template <class T>
struct CoefficientTraits {
  static T from_rational(const Rational& r) { return T(r); }
  static bool is_zero(const T& c) { return c == T{}; }
};

template <>
struct CoefficientTraits<double> {
  static double from_rational(const Rational& r) { return to_double(r); }
  static bool is_zero(double c) { return c == 0.0; }
};

/// Sparse exterior form over an orthonormal coframe e^1..e^n. Coefficients
/// live in T (exact rationals, doubles, or symbolic expressions). Keys are
/// canonical monomials; zero coefficients are never stored.
template <class T>
class BasicForm {
 public:
  using coefficient_type = T;
  using TermMap = std::map<MultiIndex, T>;
  using Traits = CoefficientTraits<T>;
  static constexpr int kMixed = -1;

  BasicForm() = default;

  BasicForm(int dim, int grade) : dim_(dim), grade_(grade) {
    if (dim < 0 || dim > MultiIndex::kMaxIndex) throw DimensionError("form dimension out of range");
    if (grade != kMixed && (grade < 0 || grade > dim)) throw GradeError("grade out of range");
  }

  static BasicForm constant(int dim, const T& value) {
    BasicForm f(dim, 0);
    f.add_term(MultiIndex{}, value);
    return f;
  }

  static BasicForm basis(int dim, int i, const T& coeff = T(1)) {
    BasicForm f(dim, 1);
    f.add_term(MultiIndex{i}, coeff);
    return f;
  }

  /// Monomial from an arbitrary index tuple; the permutation sign is absorbed.
  static BasicForm monomial(int dim, std::initializer_list<int> idx, const T& coeff = T(1)) {
    return monomial(dim, std::span<const int>(idx.begin(), idx.size()), coeff);
  }

  static BasicForm monomial(int dim, std::span<const int> idx, const T& coeff = T(1)) {
    BasicForm f(dim, static_cast<int>(idx.size()));
    auto [key, sign] = canonicalize(idx);
    if (sign != 0) f.add_term(key, sign > 0 ? coeff : -coeff);
    return f;
  }

  static BasicForm volume(int dim, Orientation o = {}) {
    BasicForm f(dim, dim);
    f.add_term(MultiIndex::from_bits(full_mask(dim)), o.sign > 0 ? T(1) : -T(1));
    return f;
  }

  int dim() const noexcept { return dim_; }
  int grade() const noexcept { return grade_; }
  bool is_homogeneous() const noexcept { return grade_ != kMixed; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const TermMap& terms() const noexcept { return terms_; }

  T coefficient(MultiIndex idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? T{} : it->second;
  }
  T coefficient(std::initializer_list<int> idx) const { return coefficient(MultiIndex(idx)); }

  /// Accumulates c into the coefficient of idx.
  void add_term(MultiIndex idx, const T& c) {
    if (idx.max_index() > dim_) throw DimensionError("monomial index exceeds form dimension");
    if (grade_ != kMixed && idx.size() != grade_) {
      if (terms_.empty() && Traits::is_zero(c)) return;
      grade_ = kMixed;
    }
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(idx, c);
    if (!inserted) {
      it->second = it->second + c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  BasicForm& operator+=(const BasicForm& other) {
    check_dim(other);
    if (grade_ != other.grade_) grade_ = merged_grade(*this, other);
    for (const auto& [k, v] : other.terms_) add_term(k, v);
    return *this;
  }

  BasicForm& operator-=(const BasicForm& other) {
    check_dim(other);
    if (grade_ != other.grade_) grade_ = merged_grade(*this, other);
    for (const auto& [k, v] : other.terms_) add_term(k, -v);
    return *this;
  }

  BasicForm& operator*=(const T& s) {
    if (Traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second = it->second * s;
      if (Traits::is_zero(it->second)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator-(BasicForm a) {
    for (auto& [k, v] : a.terms_) v = -v;
    return a;
  }
  friend BasicForm operator*(BasicForm a, const T& s) { return a *= s; }
  friend BasicForm operator*(const T& s, BasicForm a) { return a *= s; }

  /// Equal as forms: same ambient dimension and the same terms. Zero forms of
  /// different declared grade compare equal.
  friend bool operator==(const BasicForm& a, const BasicForm& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Applies f to every coefficient, producing a form over the result type.
  template <class F>
  auto transform(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    BasicForm<U> out(dim_, grade_);
    for (const auto& [k, v] : terms_) out.add_term(k, f(v));
    return out;
  }

  /// Checks the storage invariants: indices within range, homogeneous grade
  /// matches every key, no stored zero.
  bool is_canonical() const {
    for (const auto& [k, v] : terms_) {
      if (k.max_index() > dim_) return false;
      if (grade_ != kMixed && k.size() != grade_) return false;
      if (Traits::is_zero(v)) return false;
    }
    return true;
  }

  /// Re-canonicalizes from scratch (sorted tuples, merged duplicates).
  BasicForm canonicalized() const {
    BasicForm out(dim_, grade_);
    for (const auto& [k, v] : terms_) {
      const auto idx = k.indices();
      auto [key, sign] = canonicalize(idx);
      if (sign != 0) out.add_term(key, sign > 0 ? v : -v);
    }
    return out;
  }

  static constexpr std::uint32_t full_mask(int dim) noexcept {
    return dim >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << dim) - 1U);
  }

 private:
  void check_dim(const BasicForm& other) const {
    if (dim_ != other.dim_) throw DimensionError("forms of different ambient dimension");
  }

  static int merged_grade(const BasicForm& a, const BasicForm& b) {
    if (a.is_zero() && b.grade_ != kMixed) return b.grade_;
    if (b.is_zero() && a.grade_ != kMixed) return a.grade_;
    return kMixed;
  }

  int dim_ = 0;
  int grade_ = 0;
  TermMap terms_;
};

using Form = BasicForm<Rational>;
using FormD = BasicForm<double>;

template <class T>
BasicForm<T> wedge(const BasicForm<T>& a, const BasicForm<T>& b) {
  if (a.dim() != b.dim()) throw DimensionError("wedge of forms with different dimension");
  const int grade = (a.is_homogeneous() && b.is_homogeneous()) ? a.grade() + b.grade() : BasicForm<T>::kMixed;
  BasicForm<T> out(a.dim(), grade <= a.dim() ? grade : BasicForm<T>::kMixed);
  for (const auto& [ka, va] : a.terms()) {
    for (const auto& [kb, vb] : b.terms()) {
      const int s = wedge_sign(ka, kb);
      if (s == 0) continue;
      const T prod = va * vb;
      out.add_term(MultiIndex::from_bits(ka.bits() | kb.bits()), s > 0 ? prod : -prod);
    }
  }
  return out;
}

template <class T, class... Rest>
BasicForm<T> wedge(const BasicForm<T>& a, const BasicForm<T>& b, const Rest&... rest) {
  return wedge(wedge(a, b), rest...);
}

/// Hodge star for the orthonormal coframe: a ^ *b = <a,b> vol, where
/// vol = orientation.sign * e^{1..n}.
template <class T>
BasicForm<T> hodge(const BasicForm<T>& a, Orientation orientation = {}) {
  const int n = a.dim();
  const std::uint32_t full = BasicForm<T>::full_mask(n);
  BasicForm<T> out(n, a.is_homogeneous() ? n - a.grade() : BasicForm<T>::kMixed);
  for (const auto& [k, v] : a.terms()) {
    const MultiIndex comp = MultiIndex::from_bits(full & ~k.bits());
    const int s = wedge_sign(k, comp) * orientation.sign;
    out.add_term(comp, s > 0 ? v : -v);
  }
  return out;
}

/// Inner product induced by the orthonormal coframe.
template <class T>
T inner(const BasicForm<T>& a, const BasicForm<T>& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner product of forms with different dimension");
  if (a.is_homogeneous() && b.is_homogeneous() && a.grade() != b.grade() && !a.is_zero() && !b.is_zero()) {
    throw GradeError("inner product of forms with different grade");
  }
  T acc{};
  for (const auto& [k, v] : a.terms()) {
    auto it = b.terms().find(k);
    if (it != b.terms().end()) acc = acc + v * it->second;
  }
  return acc;
}

/// Largest absolute coefficient; zero for the zero form.
template <class T>
double max_abs(const BasicForm<T>& a) {
  double m = 0.0;
  for (const auto& [k, v] : a.terms()) {
    double x;
    if constexpr (std::is_same_v<T, double>) {
      x = v;
    } else {
      x = to_double(v);
    }
    if (x < 0) x = -x;
    if (x > m) m = x;
  }
  return m;
}

inline FormD to_double(const Form& f) {
  return f.transform([](const Rational& r) { return to_double(r); });
}

template <class T>
BasicForm<T> lift_form(const Form& f) {
  return f.transform([](const Rational& r) { return CoefficientTraits<T>::from_rational(r); });
}

/// Re-embeds a form into a larger ambient dimension (same indices).
template <class T>
BasicForm<T> embed(const BasicForm<T>& f, int new_dim) {
  if (new_dim < f.dim()) throw DimensionError("cannot embed into a smaller dimension");
  BasicForm<T> out(new_dim, f.grade());
  for (const auto& [k, v] : f.terms()) out.add_term(k, v);
  return out;
}

inline std::string monomial_string(MultiIndex k) {
  if (k.empty()) return "1";
  std::string s = "e^";
  const auto idx = k.indices();
  bool braces = idx.size() > 1 || idx.front() > 9;
  if (braces) s += "{";
  for (int i : idx) s += std::to_string(i);
  if (braces) s += "}";
  return s;
}

/// Human-readable rendering, e.g. "e^{14} - e^{23} + e^{56}".
inline std::string to_string(const Form& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : f.terms()) {
    Rational c = v;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (c < 0) c = -c;
    if (c != 1 || k.empty()) {
      os << to_string(c);
      if (!k.empty()) os << " ";
    }
    if (!k.empty()) os << monomial_string(k);
    first = false;
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Form& f) { return os << to_string(f); }

}  // namespace g2cert
