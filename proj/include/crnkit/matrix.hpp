#ifndef CRNKIT_MATRIX_HPP
#define CRNKIT_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "crnkit/rational.hpp"

namespace crnkit {

using RVec = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  static Matrix from_rows(const std::vector<RVec>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("Matrix: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RVec row(std::size_t i) const {
    RVec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }
  RVec col(std::size_t j) const {
    RVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: dimension mismatch in product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

/// Result of an exact row reduction. `reduced` is the RREF of the input,
/// `transform` satisfies transform * input == reduced and is invertible
/// (a record of the row operations), `pivot_cols` lists pivot columns in
/// increasing order.
struct RowReduction {
  Matrix reduced;
  Matrix transform;
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const { return pivot_cols.size(); }
};

/// Exact Gauss-Jordan elimination to reduced row-echelon form. Pivot rule:
/// first row with a nonzero entry in column order.
inline RowReduction row_reduce(const Matrix& m) {
  RowReduction out;
  out.reduced = m;
  out.transform = Matrix::identity(m.rows());
  Matrix& a = out.reduced;
  Matrix& t = out.transform;
  std::size_t pr = 0;  // next pivot row
  for (std::size_t c = 0; c < m.cols() && pr < m.rows(); ++c) {
    std::size_t sel = pr;
    while (sel < m.rows() && a(sel, c).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != pr) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(a(pr, j), a(sel, j));
      for (std::size_t j = 0; j < m.rows(); ++j) std::swap(t(pr, j), t(sel, j));
    }
    Rational inv = Rational(1) / a(pr, c);
    for (std::size_t j = 0; j < m.cols(); ++j) a(pr, j) *= inv;
    for (std::size_t j = 0; j < m.rows(); ++j) t(pr, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == pr || a(i, c).is_zero()) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) -= f * a(pr, j);
      for (std::size_t j = 0; j < m.rows(); ++j) t(i, j) -= f * t(pr, j);
    }
    out.pivot_cols.push_back(c);
    ++pr;
  }
  return out;
}

inline std::size_t rank(const Matrix& m) { return row_reduce(m).rank(); }

/// Canonical basis of the right null space {x : M x = 0}, one vector per
/// free column, each with a 1 in its free coordinate.
inline std::vector<RVec> null_space(const Matrix& m) {
  RowReduction rr = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<RVec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RVec v(m.cols());
    v[free] = Rational(1);
    for (std::size_t p = 0; p < rr.pivot_cols.size(); ++p)
      v[rr.pivot_cols[p]] = -rr.reduced(p, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves M x = b exactly. Returns false when inconsistent; when the system
/// is underdetermined the free coordinates of x are set to zero.
inline bool solve(const Matrix& m, const RVec& b, RVec& x) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: size mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  RowReduction rr = row_reduce(aug);
  for (std::size_t c : rr.pivot_cols)
    if (c == m.cols()) return false;  // pivot in the constants column
  x.assign(m.cols(), Rational());
  for (std::size_t p = 0; p < rr.pivot_cols.size(); ++p)
    x[rr.pivot_cols[p]] = rr.reduced(p, m.cols());
  return true;
}

inline Rational dot(const RVec& a, const RVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace crnkit

#endif  // CRNKIT_MATRIX_HPP
