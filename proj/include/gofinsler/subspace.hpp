#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gofinsler/qmatrix.hpp"

namespace gofinsler {

/// A linear subspace of Q^n given by a full-column-rank basis matrix.
/// The basis order is kept as supplied: downstream coordinates (for example
/// the norm on a complement) are expressed in it.
class Subspace {
 public:
  Subspace() = default;

  /// Throws InputError unless `basis` has full column rank.
  Subspace(std::size_t ambient_dim, QMatrix basis) : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.cols() == 0) basis_ = QMatrix(ambient_, 0);
    if (basis_.rows() != ambient_) throw InputError("subspace basis has wrong ambient dimension");
    if (rank(basis_) != basis_.cols()) throw InputError("subspace basis is not linearly independent");
  }

  /// Span of arbitrary (possibly dependent) vectors.
  static Subspace span(std::size_t ambient_dim, const std::vector<QVector>& vectors) {
    return span(QMatrix::from_columns(ambient_dim, vectors));
  }
  static Subspace span(const QMatrix& columns) {
    return Subspace(columns.rows(), independent_columns(columns));
  }
  static Subspace zero(std::size_t n) { return Subspace(n, QMatrix(n, 0)); }
  static Subspace whole(std::size_t n) { return Subspace(n, QMatrix::identity(n)); }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.cols(); }
  bool is_zero() const noexcept { return dim() == 0; }
  const QMatrix& basis() const noexcept { return basis_; }
  QVector vector(std::size_t i) const { return basis_.col(i); }
  std::vector<QVector> vectors() const { return basis_.columns(); }

  bool contains(const QVector& v) const {
    if (v.size() != ambient_) throw InputError("vector has wrong dimension");
    if (gofinsler::is_zero(v)) return true;
    return solve(basis_, v).has_value();
  }
  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw InputError("subspaces live in different spaces");
    if (other.dim() > dim()) return false;
    return rank(QMatrix::hcat(basis_, other.basis_)) == dim();
  }

  /// Coordinates of v in this basis; throws PreconditionError if v is not in the span.
  QVector coordinates(const QVector& v) const {
    auto x = solve(basis_, v);
    if (!x) throw PreconditionError("vector is not contained in the subspace");
    return *x;
  }
  /// Coordinates of every column of `vectors` (ambient x k) in this basis.
  QMatrix coordinates(const QMatrix& vectors) const {
    auto x = solve(basis_, vectors);
    if (!x) throw PreconditionError("vectors are not contained in the subspace");
    return *x;
  }

  /// Rows P with P x = 0 exactly when x lies in the subspace.
  QMatrix annihilator() const { return kernel(basis_.transpose()).transpose(); }

  /// Basis in reduced column-echelon form: equal subspaces give equal matrices.
  QMatrix canonical_basis() const {
    auto ef = rref(basis_.transpose());
    QMatrix rows(ef.pivots.size(), ambient_);
    for (std::size_t i = 0; i < ef.pivots.size(); ++i)
      for (std::size_t j = 0; j < ambient_; ++j) rows(i, j) = ef.reduced(i, j);
    return rows.transpose();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.dim() == b.dim() && a.contains(b);
  }

 private:
  std::size_t ambient_ = 0;
  QMatrix basis_;
};

inline Subspace operator+(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("subspaces live in different spaces");
  return Subspace::span(QMatrix::hcat(a.basis(), b.basis()));
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("subspaces live in different spaces");
  if (a.is_zero() || b.is_zero()) return Subspace::zero(a.ambient_dim());
  // a x = b y  <=>  [a | -b] (x, y) = 0
  QMatrix stacked = QMatrix::hcat(a.basis(), Rational(-1) * b.basis());
  QMatrix ker = kernel(stacked);
  std::vector<QVector> vecs;
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    QVector x(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) x[i] = ker(i, j);
    vecs.push_back(a.basis() * x);
  }
  return Subspace::span(a.ambient_dim(), vecs);
}

/// A complement of `inner` inside `outer` (inner must be contained in outer),
/// built from the basis vectors of `outer` that extend a basis of `inner`.
inline Subspace complement_in(const Subspace& outer, const Subspace& inner) {
  if (!outer.contains(inner)) throw PreconditionError("complement_in: inner not contained in outer");
  QMatrix joined = QMatrix::hcat(inner.basis(), outer.basis());
  auto ef = rref(joined);
  std::vector<QVector> extra;
  for (auto p : ef.pivots)
    if (p >= inner.dim()) extra.push_back(joined.col(p));
  return Subspace::span(outer.ambient_dim(), extra);
}

/// True when a and b intersect trivially and together span `whole_dim` dimensions.
inline bool is_direct_sum(const Subspace& a, const Subspace& b, std::size_t whole_dim) {
  return a.dim() + b.dim() == whole_dim && (a + b).dim() == whole_dim;
}

}  // namespace gofinsler
