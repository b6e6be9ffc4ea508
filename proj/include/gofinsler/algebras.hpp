#pragma once

// Named Lie algebras used by the example catalog and the tests.

#include <string>
#include <vector>

#include "gofinsler/liealg.hpp"

namespace gofinsler::algebras {

inline QMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  QMatrix m(n, n);
  m(i, j) = 1;
  return m;
}

inline LieAlgebra abelian(std::size_t n) { return LieAlgebra(n, {}, std::vector<Rational>(n * n * n)); }

/// sl(2,R) in the basis H, E, F of its 2x2 matrix realization.
inline LieAlgebra sl2() {
  QMatrix h(2, 2), e(2, 2), f(2, 2);
  h(0, 0) = 1;
  h(1, 1) = -1;
  e(0, 1) = 1;
  f(1, 0) = 1;
  return LieAlgebra::from_matrices({"H", "E", "F"}, {h, e, f});
}

/// Heisenberg algebra: [X, Y] = Z.
inline LieAlgebra heis3() {
  return LieAlgebra::from_brackets(3, {"X", "Y", "Z"}, {{0, 1, 2, 1}});
}

/// Filiform algebra n4: [e1, e2] = e3, [e1, e3] = e4.
inline LieAlgebra filiform4() {
  return LieAlgebra::from_brackets(4, {"e1", "e2", "e3", "e4"}, {{0, 1, 2, 1}, {0, 2, 3, 1}});
}

/// Two-dimensional non-abelian algebra: [e1, e2] = e2.
inline LieAlgebra axb() { return LieAlgebra::from_brackets(2, {"e1", "e2"}, {{0, 1, 1, 1}}); }

/// Skew 3x3 generators: L1 rotates (e2, e3), L2 rotates (e3, e1), L3 rotates (e1, e2).
inline std::vector<QMatrix> so3_generators(std::size_t n = 3) {
  auto rot = [n](std::size_t i, std::size_t j) { return matrix_unit(n, j, i) - matrix_unit(n, i, j); };
  return {rot(1, 2), rot(2, 0), rot(0, 1)};
}

inline LieAlgebra so3() { return LieAlgebra::from_matrices({"L1", "L2", "L3"}, so3_generators()); }

/// so(3,1) preserving diag(1,1,1,-1): rotations L1..L3 then boosts K1..K3.
inline LieAlgebra so31() {
  std::vector<QMatrix> mats = so3_generators(4);
  for (std::size_t i = 0; i < 3; ++i) mats.push_back(matrix_unit(4, i, 3) + matrix_unit(4, 3, i));
  return LieAlgebra::from_matrices({"L1", "L2", "L3", "K1", "K2", "K3"}, mats);
}

/// Rotation D of heis3 with D X = Y, D Y = -X, D Z = 0.
inline QMatrix heis3_rotation() {
  QMatrix d(3, 3);
  d(1, 0) = 1;
  d(0, 1) = -1;
  return d;
}

/// heis3 ⋊ so(2): basis X, Y, Z, D.
inline LieAlgebra heis3_so2() { return semidirect_with_derivations(heis3(), {heis3_rotation()}, {"D"}); }

/// so(n) basis: E_ji - E_ij for i < j, in lexicographic order.
inline std::vector<QMatrix> so_n_basis(std::size_t n) {
  std::vector<QMatrix> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(matrix_unit(n, j, i) - matrix_unit(n, i, j));
  return out;
}

/// Matrix of X -> -X^T on an algebra built from a matrix realization.
inline QMatrix transpose_involution(const LieAlgebra& g) {
  if (!g.realization()) throw PreconditionError("algebra has no matrix realization");
  const auto& mats = *g.realization();
  const std::size_t n = g.dim(), N = mats.front().rows();
  std::vector<QVector> flat;
  for (const auto& m : mats) flat.push_back(detail::flatten(m));
  const QMatrix basis = QMatrix::from_columns(N * N, flat);
  QMatrix theta(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto coords = solve(basis, detail::flatten(Rational(-1) * mats[j].transpose()));
    if (!coords) throw PreconditionError("realization is not closed under transposition");
    for (std::size_t i = 0; i < n; ++i) theta(i, j) = (*coords)[i];
  }
  return theta;
}

/// Block-diagonal map diag(a, b).
inline QMatrix block_diag(const QMatrix& a, const QMatrix& b) {
  QMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

}  // namespace gofinsler::algebras
