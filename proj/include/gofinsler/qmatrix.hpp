#pragma once

// Dense matrices over the rationals and the exact linear algebra the
// algebraic layer is built on: echelon forms, kernels, solves, inertia.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gofinsler/error.hpp"
#include "gofinsler/rational.hpp"

namespace gofinsler {

using QVector = std::vector<Rational>;

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static QMatrix from_rows(const std::vector<QVector>& rows) {
    if (rows.empty()) return {};
    QMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw InputError("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Columns given as vectors of length `rows`; an empty list yields rows x 0.
  static QMatrix from_columns(std::size_t rows, const std::vector<QVector>& cols) {
    QMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw InputError("column has wrong length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVector col(std::size_t j) const {
    QVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  QVector row(std::size_t i) const {
    return QVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<QVector> columns() const {
    std::vector<QVector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(col(j));
    return out;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& r) { return r == 0; });
  }

  Eigen::MatrixXd to_eigen() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = to_double((*this)(i, j));
    return m;
  }

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product dimension mismatch");
    QMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend QVector operator*(const QMatrix& a, const QVector& x) {
    if (a.cols_ != x.size()) throw InputError("matrix-vector dimension mismatch");
    QVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (a(i, j) != 0 && x[j] != 0) y[i] += a(i, j) * x[j];
    return y;
  }
  friend QMatrix operator+(QMatrix a, const QMatrix& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend QMatrix operator-(QMatrix a, const QMatrix& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend QMatrix operator*(const Rational& s, QMatrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  /// [a | b]
  static QMatrix hcat(const QMatrix& a, const QMatrix& b) {
    if (a.rows_ != b.rows_) throw InputError("hcat row mismatch");
    QMatrix m(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
    }
    return m;
  }
  static QMatrix vcat(const QMatrix& a, const QMatrix& b) {
    if (a.rows_ == 0) return b;
    if (b.rows_ == 0) return a;
    if (a.cols_ != b.cols_) throw InputError("vcat column mismatch");
    QMatrix m(a.rows_ + b.rows_, a.cols_);
    std::copy(a.data_.begin(), a.data_.end(), m.data_.begin());
    std::copy(b.data_.begin(), b.data_.end(),
              m.data_.begin() + static_cast<std::ptrdiff_t>(a.data_.size()));
    return m;
  }

 private:
  void check_same(const QMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw InputError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// --- vector helpers -------------------------------------------------------

inline QVector zero_vector(std::size_t n) { return QVector(n); }

inline QVector unit_vector(std::size_t n, std::size_t i) {
  QVector v(n);
  v[i] = 1;
  return v;
}

inline bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r == 0; });
}

inline QVector add(QVector a, const QVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline QVector sub(QVector a, const QVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline QVector scale(const Rational& s, QVector a) {
  for (auto& x : a) x *= s;
  return a;
}
inline Rational dot(const QVector& a, const QVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

inline Eigen::VectorXd to_eigen(const QVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = to_double(v[i]);
  return out;
}

// --- exact elimination ----------------------------------------------------

struct EchelonForm {
  QMatrix reduced;                   ///< reduced row echelon form
  std::vector<std::size_t> pivots;   ///< pivot column of each nonzero row
};

inline EchelonForm rref(QMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (m(row, j) != 0) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

/// Basis of {x : m x = 0}, as the columns of a cols(m) x k matrix.
inline QMatrix kernel(const QMatrix& m) {
  const auto ef = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : ef.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    QVector v(n);
    v[free] = 1;
    for (std::size_t r = 0; r < ef.pivots.size(); ++r) v[ef.pivots[r]] = -ef.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return QMatrix::from_columns(n, basis);
}

/// Maximal linearly independent subset of the columns of m (in order).
inline QMatrix independent_columns(const QMatrix& m) {
  const auto ef = rref(m);
  QMatrix out(m.rows(), ef.pivots.size());
  for (std::size_t j = 0; j < ef.pivots.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, ef.pivots[j]);
  return out;
}

/// Some solution of m x = b, or nullopt when inconsistent.
inline std::optional<QVector> solve(const QMatrix& m, const QVector& b) {
  if (b.size() != m.rows()) throw InputError("solve: rhs length mismatch");
  QMatrix aug = QMatrix::hcat(m, QMatrix::from_columns(m.rows(), {b}));
  const auto ef = rref(aug);
  QVector x(m.cols());
  for (std::size_t r = 0; r < ef.pivots.size(); ++r) {
    if (ef.pivots[r] == m.cols()) return std::nullopt;
    x[ef.pivots[r]] = ef.reduced(r, m.cols());
  }
  return x;
}

/// Solves m X = B column by column; nullopt if any column is inconsistent.
inline std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b) {
  QMatrix aug = QMatrix::hcat(m, b);
  const auto ef = rref(aug);
  QMatrix x(m.cols(), b.cols());
  for (std::size_t r = 0; r < ef.pivots.size(); ++r) {
    if (ef.pivots[r] >= m.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(ef.pivots[r], j) = ef.reduced(r, m.cols() + j);
  }
  return x;
}

inline QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("inverse of non-square matrix");
  auto x = solve(m, QMatrix::identity(m.rows()));
  if (!x || rank(m) != m.rows()) throw PreconditionError("matrix is singular");
  return *x;
}

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

/// Sylvester inertia of a symmetric rational matrix by exact congruence
/// diagonalization (symmetric elimination with 2x2 pivot repair).
inline Inertia inertia(QMatrix m) {
  if (m.rows() != m.cols()) throw InputError("inertia of non-square matrix");
  const std::size_t n = m.rows();
  if (!(m == m.transpose())) throw InputError("inertia of non-symmetric matrix");
  Inertia out;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && m(i, i) != 0) { piv = i; break; }
    if (piv == n) {
      // No nonzero diagonal left: combine two coordinates with m(i,j) != 0.
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && m(i, j) != 0) { pi = i; pj = j; break; }
      if (pi == n) break;
      // e_i <- e_i + e_j : row_i += row_j, col_i += col_j.
      for (std::size_t k = 0; k < n; ++k) m(pi, k) += m(pj, k);
      for (std::size_t k = 0; k < n; ++k) m(k, pi) += m(k, pj);
      piv = pi;
    }
    const Rational d = m(piv, piv);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || i == piv || m(i, piv) == 0) continue;
      const Rational f = m(i, piv) / d;
      for (std::size_t k = 0; k < n; ++k) m(i, k) -= f * m(piv, k);
      for (std::size_t k = 0; k < n; ++k) m(k, i) -= f * m(k, piv);
    }
    done[piv] = true;
    (d > 0 ? out.positive : out.negative)++;
  }
  out.zero = n - out.positive - out.negative;
  return out;
}

inline bool is_positive_definite(const QMatrix& m) {
  return m.rows() == 0 || inertia(m).positive == m.rows();
}
inline bool is_negative_definite(const QMatrix& m) {
  return m.rows() == 0 || inertia(m).negative == m.rows();
}

}  // namespace gofinsler
