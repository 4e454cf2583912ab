#pragma once

#include <cstddef>
#include <vector>

#include "g2cert/errors.hpp"
#include "g2cert/rational.hpp"

namespace g2cert {

using RVector = std::vector<Rational>;

/// Dense row-major rational matrix, small sizes only (n <= 49).
struct RMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> data;

  RMatrix() = default;
  RMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

  static RMatrix identity(int n) {
    RMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  Rational& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const Rational& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  friend bool operator==(const RMatrix&, const RMatrix&) = default;

  friend RMatrix operator*(const RMatrix& a, const RMatrix& b) {
    if (a.cols != b.rows) throw DimensionError("matrix product shape mismatch");
    RMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
      for (int k = 0; k < a.cols; ++k) {
        if (a(i, k) == 0) continue;
        for (int j = 0; j < b.cols; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    }
    return out;
  }

  friend RMatrix operator-(const RMatrix& a, const RMatrix& b) {
    RMatrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
  }

  RVector apply(const RVector& v) const {
    RVector out(rows);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) out[i] += (*this)(i, j) * v[j];
    }
    return out;
  }

  bool is_zero() const {
    for (const auto& x : data) {
      if (x != 0) return false;
    }
    return true;
  }
};

/// Reduced row echelon basis of the span of the given vectors.
inline std::vector<RVector> row_reduce(std::vector<RVector> rows) {
  if (rows.empty()) return rows;
  const std::size_t ncols = rows.front().size();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < ncols && pivot_row < rows.size(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[pivot_row]);
    const Rational inv = 1 / rows[pivot_row][col];
    for (auto& x : rows[pivot_row]) x *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == pivot_row || rows[r][col] == 0) continue;
      const Rational f = rows[r][col];
      for (std::size_t c = col; c < ncols; ++c) rows[r][c] -= f * rows[pivot_row][c];
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

inline int rank(std::vector<RVector> rows) { return static_cast<int>(row_reduce(std::move(rows)).size()); }

inline int rank(const RMatrix& m) {
  std::vector<RVector> rows(m.rows, RVector(m.cols));
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) rows[i][j] = m(i, j);
  }
  return rank(std::move(rows));
}

}  // namespace g2cert
