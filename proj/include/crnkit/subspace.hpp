#ifndef CRNKIT_SUBSPACE_HPP
#define CRNKIT_SUBSPACE_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "crnkit/matrix.hpp"

namespace crnkit {

/// A linear subspace of Q^n in canonical form: the basis is the nonzero
/// rows of the RREF of any spanning set, pivot-ordered. Two Subspace values
/// are equal as sets of vectors iff their bases compare equal.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}

  static Subspace span(std::size_t ambient_dim, const std::vector<RVec>& vectors) {
    Subspace s(ambient_dim);
    if (vectors.empty()) return s;
    for (const auto& v : vectors)
      if (v.size() != ambient_dim) throw std::invalid_argument("Subspace: wrong vector length");
    RowReduction rr = row_reduce(Matrix::from_rows(vectors));
    for (std::size_t i = 0; i < rr.rank(); ++i) s.basis_.push_back(rr.reduced.row(i));
    return s;
  }

  static Subspace column_space(const Matrix& m) {
    std::vector<RVec> cols;
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
    return span(m.rows(), cols);
  }

  static Subspace full(std::size_t ambient_dim) {
    std::vector<RVec> e;
    for (std::size_t i = 0; i < ambient_dim; ++i) {
      RVec v(ambient_dim);
      v[i] = Rational(1);
      e.push_back(std::move(v));
    }
    return span(ambient_dim, e);
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<RVec>& basis() const { return basis_; }

  bool contains(const RVec& v) const {
    if (v.size() != ambient_) throw std::invalid_argument("Subspace: wrong vector length");
    std::vector<RVec> rows = basis_;
    rows.push_back(v);
    return rank(Matrix::from_rows(rows)) == dim();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  std::size_t ambient_;
  std::vector<RVec> basis_;
};

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("subspace_sum: ambient dimension mismatch");
  std::vector<RVec> rows = a.basis();
  rows.insert(rows.end(), b.basis().begin(), b.basis().end());
  return Subspace::span(a.ambient_dim(), rows);
}

/// dim(A ∩ B) = dim A + dim B − dim(A + B).
inline std::size_t subspace_intersection_dim(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("subspace_intersection_dim: ambient dimension mismatch");
  return a.dim() + b.dim() - subspace_sum(a, b).dim();
}

inline Subspace orthogonal_complement(const Subspace& a) {
  if (a.dim() == 0) return Subspace::full(a.ambient_dim());
  return Subspace::span(a.ambient_dim(), null_space(Matrix::from_rows(a.basis())));
}

}  // namespace crnkit

#endif  // CRNKIT_SUBSPACE_HPP
