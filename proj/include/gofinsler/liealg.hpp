#pragma once

// Exact Lie-algebra core. Everything here runs over the rationals: structure
// constants, Killing form, ideals, central/derived series, radical,
// nilradical, Levi decomposition and derivation spaces.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gofinsler/qmatrix.hpp"
#include "gofinsler/subspace.hpp"

namespace gofinsler {

/// One nonzero structure constant: [e_i, e_j] has coefficient `value` on e_k.
struct BracketEntry {
  std::size_t i = 0, j = 0, k = 0;
  Rational value;
};

class LieAlgebra {
 public:
  LieAlgebra() = default;

  /// Dense constructor: c[(i*n + j)*n + k] = c_ij^k. Verifies antisymmetry and
  /// the Jacobi identity exactly.
  LieAlgebra(std::size_t dim, std::vector<std::string> labels, std::vector<Rational> constants)
      : dim_(dim), labels_(std::move(labels)), c_(std::move(constants)) {
    if (labels_.empty())
      for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
    if (labels_.size() != dim_) throw InputError("wrong number of basis labels");
    if (c_.size() != dim_ * dim_ * dim_) throw InputError("structure constant table has wrong size");
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k)
          if (c(i, j, k) != -c(j, i, k))
            throw InputError("structure constants not antisymmetric at (" + std::to_string(i) + "," +
                             std::to_string(j) + "," + std::to_string(k) + ")");
    build_ad();
    if (auto bad = jacobi_violation())
      throw InputError("Jacobi identity fails for basis triple (" + std::to_string(std::get<0>(*bad)) +
                       "," + std::to_string(std::get<1>(*bad)) + "," +
                       std::to_string(std::get<2>(*bad)) + ")");
  }

  /// Sparse constructor. Each entry sets c_ij^k and c_ji^k = -c_ij^k; an
  /// entry contradicting an earlier one is an error.
  static LieAlgebra from_brackets(std::size_t dim, std::vector<std::string> labels,
                                  const std::vector<BracketEntry>& entries) {
    std::vector<Rational> c(dim * dim * dim);
    std::vector<bool> set(c.size(), false);
    auto idx = [dim](std::size_t i, std::size_t j, std::size_t k) { return (i * dim + j) * dim + k; };
    for (const auto& e : entries) {
      if (e.i >= dim || e.j >= dim || e.k >= dim) throw InputError("bracket index out of range");
      if (e.i == e.j) {
        if (e.value != 0) throw InputError("[e_i, e_i] must vanish");
        continue;
      }
      for (auto [a, b, v] : {std::tuple{e.i, e.j, e.value}, std::tuple{e.j, e.i, Rational(-e.value)}}) {
        const auto p = idx(a, b, e.k);
        if (set[p] && c[p] != v) throw InputError("conflicting bracket entries");
        c[p] = v;
        set[p] = true;
      }
    }
    return LieAlgebra(dim, std::move(labels), std::move(c));
  }

  /// Algebra spanned by linearly independent square matrices under the
  /// commutator. The realization is kept (used for Cartan involutions).
  static LieAlgebra from_matrices(std::vector<std::string> labels, const std::vector<QMatrix>& mats) {
    const std::size_t n = mats.size();
    if (n == 0) return LieAlgebra(0, {}, {});
    const std::size_t N = mats.front().rows();
    auto flatten = [N](const QMatrix& m) {
      QVector v(N * N);
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) v[i * N + j] = m(i, j);
      return v;
    };
    std::vector<QVector> flat;
    for (const auto& m : mats) {
      if (m.rows() != N || m.cols() != N) throw InputError("realization matrices must share a square shape");
      flat.push_back(flatten(m));
    }
    const QMatrix basis = QMatrix::from_columns(N * N, flat);
    if (rank(basis) != n) throw InputError("realization matrices are linearly dependent");
    std::vector<Rational> c(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const QMatrix comm = mats[i] * mats[j] - mats[j] * mats[i];
        auto coords = solve(basis, flatten(comm));
        if (!coords) throw InputError("realization is not closed under the commutator");
        for (std::size_t k = 0; k < n; ++k) {
          c[(i * n + j) * n + k] = (*coords)[k];
          c[(j * n + i) * n + k] = -(*coords)[k];
        }
      }
    LieAlgebra g(n, std::move(labels), std::move(c));
    g.realization_ = mats;
    return g;
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Rational& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }
  const std::vector<Rational>& structure_constants() const noexcept { return c_; }
  const std::optional<std::vector<QMatrix>>& realization() const noexcept { return realization_; }

  /// Nonzero c_ij^k with i < j.
  std::vector<BracketEntry> bracket_entries() const {
    std::vector<BracketEntry> out;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k)
          if (c(i, j, k) != 0) out.push_back({i, j, k, c(i, j, k)});
    return out;
  }

  /// Matrix of ad(e_i): column j holds the coordinates of [e_i, e_j].
  const QMatrix& ad_basis(std::size_t i) const { return ad_[i]; }

  QMatrix ad(const QVector& x) const {
    check(x);
    QMatrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      if (x[i] != 0) m = m + x[i] * ad_[i];
    return m;
  }

  QVector bracket(const QVector& x, const QVector& y) const {
    check(x);
    check(y);
    QVector z(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j] == 0 || i == j) continue;
        const Rational xy = x[i] * y[j];
        for (std::size_t k = 0; k < dim_; ++k)
          if (c(i, j, k) != 0) z[k] += xy * c(i, j, k);
      }
    }
    return z;
  }

  /// B_ij = trace(ad(e_i) ad(e_j)).
  QMatrix killing_form() const {
    QMatrix b(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j) {
        Rational t = 0;
        // trace(ad_i ad_j) = sum_{k,l} ad_i(k,l) ad_j(l,k) = sum c_il^k c_jk^l
        for (std::size_t k = 0; k < dim_; ++k)
          for (std::size_t l = 0; l < dim_; ++l)
            if (ad_[i](k, l) != 0 && ad_[j](l, k) != 0) t += ad_[i](k, l) * ad_[j](l, k);
        b(i, j) = t;
        b(j, i) = t;
      }
    return b;
  }

  /// First basis triple violating Jacobi, if any.
  std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> jacobi_violation() const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        for (std::size_t k = j + 1; k < dim_; ++k) {
          const QVector ei = unit_vector(dim_, i), ej = unit_vector(dim_, j), ek = unit_vector(dim_, k);
          QVector s = bracket(bracket(ei, ej), ek);
          s = add(s, bracket(bracket(ej, ek), ei));
          s = add(s, bracket(bracket(ek, ei), ej));
          if (!gofinsler::is_zero(s)) return std::tuple{i, j, k};
        }
    return std::nullopt;
  }

  /// Structure constants in double precision, same indexing as c().
  std::vector<double> structure_constants_double() const {
    std::vector<double> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = to_double(c_[i]);
    return out;
  }

 private:
  void check(const QVector& x) const {
    if (x.size() != dim_) throw InputError("coordinate vector has length " + std::to_string(x.size()) +
                                           ", algebra has dimension " + std::to_string(dim_));
  }
  void build_ad() {
    ad_.assign(dim_, QMatrix(dim_, dim_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) ad_[i](k, j) = c(i, j, k);
  }

  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<Rational> c_;
  std::vector<QMatrix> ad_;
  std::optional<std::vector<QMatrix>> realization_;
};

// --- subspace algebra -----------------------------------------------------

/// span{[a, b] : a in A, b in B}
inline Subspace bracket_span(const LieAlgebra& g, const Subspace& a, const Subspace& b) {
  std::vector<QVector> out;
  for (const auto& x : a.vectors())
    for (const auto& y : b.vectors()) {
      auto z = g.bracket(x, y);
      if (!is_zero(z)) out.push_back(std::move(z));
    }
  return Subspace::span(g.dim(), out);
}

inline Subspace derived(const LieAlgebra& g, const Subspace& s) { return bracket_span(g, s, s); }

inline bool is_subalgebra(const LieAlgebra& g, const Subspace& s) { return s.contains(derived(g, s)); }

inline bool is_ideal(const LieAlgebra& g, const Subspace& s) {
  return s.contains(bracket_span(g, Subspace::whole(g.dim()), s));
}

inline bool is_abelian(const LieAlgebra& g, const Subspace& s) { return derived(g, s).is_zero(); }

/// {x in g : [x, s] = 0}
inline Subspace centralizer(const LieAlgebra& g, const Subspace& s) {
  QMatrix rows(0, g.dim());
  for (const auto& v : s.vectors()) rows = QMatrix::vcat(rows, g.ad(v));
  if (rows.rows() == 0) return Subspace::whole(g.dim());
  return Subspace(g.dim(), kernel(rows));
}

inline Subspace center(const LieAlgebra& g) { return centralizer(g, Subspace::whole(g.dim())); }

/// Center of the subalgebra s: {x in s : [x, s] = 0}.
inline Subspace center_of(const LieAlgebra& g, const Subspace& s) { return intersect(s, centralizer(g, s)); }

/// Structure constants of a subalgebra in the coordinates of its basis.
inline LieAlgebra subalgebra_structure(const LieAlgebra& g, const Subspace& s,
                                       std::vector<std::string> labels = {}) {
  const std::size_t k = s.dim();
  std::vector<Rational> c(k * k * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      QVector coords;
      try {
        coords = s.coordinates(g.bracket(s.vector(a), s.vector(b)));
      } catch (const PreconditionError&) {
        throw PreconditionError("subspace is not a subalgebra");
      }
      for (std::size_t d = 0; d < k; ++d) {
        c[(a * k + b) * k + d] = coords[d];
        c[(b * k + a) * k + d] = -coords[d];
      }
    }
  return LieAlgebra(k, std::move(labels), std::move(c));
}

/// g / ideal together with the maps relating the two coordinate systems.
struct QuotientAlgebra {
  LieAlgebra algebra;
  Subspace section;   ///< complement of the ideal in g; its basis lifts the quotient basis
  QMatrix projection; ///< dim(g/ideal) x dim(g): coordinates of x mod ideal
};

inline QuotientAlgebra quotient_algebra(const LieAlgebra& g, const Subspace& ideal) {
  if (!is_ideal(g, ideal)) throw PreconditionError("quotient by a subspace that is not an ideal");
  const std::size_t n = g.dim();
  Subspace section = complement_in(Subspace::whole(n), ideal);
  const std::size_t q = section.dim();
  const QMatrix joined = QMatrix::hcat(section.basis(), ideal.basis());
  const QMatrix inv = inverse(joined);
  QMatrix proj(q, n);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < n; ++j) proj(i, j) = inv(i, j);
  std::vector<Rational> c(q * q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b) {
      const QVector z = proj * g.bracket(section.vector(a), section.vector(b));
      for (std::size_t d = 0; d < q; ++d) {
        c[(a * q + b) * q + d] = z[d];
        c[(b * q + a) * q + d] = -z[d];
      }
    }
  return {LieAlgebra(q, {}, std::move(c)), std::move(section), std::move(proj)};
}

// --- series ---------------------------------------------------------------

enum class SeriesKind { derived, descending_central };

struct SeriesChain {
  SeriesKind kind = SeriesKind::descending_central;
  std::vector<Subspace> terms;  ///< terms[0] is the input; stops once stable or zero
};

inline SeriesChain series(const LieAlgebra& g, const Subspace& s, SeriesKind kind) {
  if (!is_subalgebra(g, s)) throw PreconditionError("series: input is not a subalgebra");
  SeriesChain chain{kind, {s}};
  while (!chain.terms.back().is_zero()) {
    const Subspace& last = chain.terms.back();
    Subspace next = kind == SeriesKind::derived ? derived(g, last) : bracket_span(g, s, last);
    if (next.dim() == last.dim()) break;
    chain.terms.push_back(std::move(next));
  }
  return chain;
}

/// Largest m with C^m(s) != 0 for the descending central series
/// C^1 = s, C^{k+1} = [s, C^k]; nullopt when s is not nilpotent.
inline std::optional<std::size_t> step_size(const LieAlgebra& g, const Subspace& s) {
  auto chain = series(g, s, SeriesKind::descending_central);
  if (!chain.terms.back().is_zero()) return std::nullopt;
  return chain.terms.size() - 1;
}

inline bool is_nilpotent(const LieAlgebra& g, const Subspace& s) { return step_size(g, s).has_value(); }

inline bool is_solvable(const LieAlgebra& g, const Subspace& s) {
  return series(g, s, SeriesKind::derived).terms.back().is_zero();
}

// --- radical / nilradical -------------------------------------------------

/// Killing-orthogonal complement of [g, g].
inline Subspace radical(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  const Subspace dg = derived(g, Subspace::whole(n));
  if (dg.is_zero()) return Subspace::whole(n);
  const QMatrix cond = dg.basis().transpose() * g.killing_form();
  Subspace r(n, kernel(cond));
  if (!is_ideal(g, r)) throw Error("internal: computed radical is not an ideal");
  return r;
}

namespace detail {

/// Incrementally maintained span of flattened matrices with a membership test.
class IncrementalSpan {
 public:
  explicit IncrementalSpan(std::size_t len) : len_(len) {}

  /// Adds v if independent of the current span; returns whether it was added.
  bool insert(const QVector& v) {
    QVector r = v;
    for (std::size_t t = 0; t < rows_.size(); ++t) {
      const Rational& f = r[pivots_[t]];
      if (f == 0) continue;
      const Rational ff = f;
      for (std::size_t j = 0; j < len_; ++j)
        if (rows_[t][j] != 0) r[j] -= ff * rows_[t][j];
    }
    std::size_t p = 0;
    while (p < len_ && r[p] == 0) ++p;
    if (p == len_) return false;
    const Rational inv = 1 / r[p];
    for (auto& x : r) x *= inv;
    for (auto& row : rows_)
      if (row[p] != 0) {
        const Rational f = row[p];
        for (std::size_t j = 0; j < len_; ++j)
          if (r[j] != 0) row[j] -= f * r[j];
      }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::size_t len_;
  std::vector<QVector> rows_;
  std::vector<std::size_t> pivots_;
};

inline QVector flatten(const QMatrix& m) {
  QVector v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

inline Rational trace_of_product(const QMatrix& a, const QMatrix& b) {
  Rational t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (a(i, k) != 0 && b(k, i) != 0) t += a(i, k) * b(k, i);
  return t;
}

}  // namespace detail

/// Maximal nilpotent ideal. ad_g(radical) is a solvable linear Lie algebra,
/// so the unital associative algebra A it generates is triangularizable and
/// x in the radical is ad-nilpotent iff trace(ad(x) a) = 0 for all a in A
/// (the diagonal weights of ad(x) vanish). The result is certified: it must be
/// a nilpotent ideal containing [g, radical].
inline Subspace nilradical(const LieAlgebra& g) {
  const std::size_t n = g.dim();
  const Subspace r = radical(g);
  if (r.is_zero()) return r;
  std::vector<QMatrix> gens;
  for (const auto& v : r.vectors()) gens.push_back(g.ad(v));

  detail::IncrementalSpan span(n * n);
  std::vector<QMatrix> algebra_basis;
  auto offer = [&](const QMatrix& m) {
    if (span.insert(detail::flatten(m))) algebra_basis.push_back(m);
  };
  offer(QMatrix::identity(n));
  for (const auto& a : gens) offer(a);
  for (std::size_t idx = 0; idx < algebra_basis.size(); ++idx)
    for (const auto& a : gens) offer(algebra_basis[idx] * a);

  QMatrix cond(algebra_basis.size(), r.dim());
  for (std::size_t t = 0; t < algebra_basis.size(); ++t)
    for (std::size_t a = 0; a < r.dim(); ++a) cond(t, a) = detail::trace_of_product(gens[a], algebra_basis[t]);
  const QMatrix coeffs = kernel(cond);
  Subspace nil = Subspace::span(r.basis() * coeffs);

  if (!is_ideal(g, nil)) throw Error("nilradical certification failed: result is not an ideal");
  if (!is_nilpotent(g, nil)) throw Error("nilradical certification failed: result is not nilpotent");
  if (!nil.contains(bracket_span(g, Subspace::whole(n), r)))
    throw Error("nilradical certification failed: result misses [g, rad(g)]");
  return nil;
}

/// Largest ideal of g inside W: stable limit of W_{k+1} = {x in W_k : [g, x] in W_k}.
inline Subspace largest_ideal_in(const LieAlgebra& g, const Subspace& w) {
  const std::size_t n = g.dim();
  Subspace cur = w;
  while (!cur.is_zero()) {
    const QMatrix p = cur.annihilator();
    if (p.rows() == 0) return cur;  // cur = g
    QMatrix cond(0, cur.dim());
    for (std::size_t i = 0; i < n; ++i) cond = QMatrix::vcat(cond, p * g.ad_basis(i) * cur.basis());
    const QMatrix ker = kernel(cond);
    if (ker.cols() == cur.dim()) return cur;
    cur = Subspace(n, cur.basis() * ker);
  }
  return cur;
}

// --- Levi decomposition ---------------------------------------------------

struct SimpleIdeal {
  Subspace ideal;
  bool compact = false;
};

struct LeviData {
  Subspace radical;
  Subspace nilradical;
  Subspace levi;
  Subspace compact_part;
  Subspace noncompact_part;
  std::vector<SimpleIdeal> simple_ideals;
  bool levi_supplied = false;
};

/// Killing form of g restricted to the subspace s, in s's basis.
inline QMatrix restricted_form(const QMatrix& form, const Subspace& s) {
  return s.basis().transpose() * form * s.basis();
}

namespace detail {

/// Deterministic small-integer generator for pseudo-random elements.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  long small(int span) { return static_cast<long>(next() % static_cast<std::uint64_t>(2 * span + 1)) - span; }

 private:
  std::uint64_t state_;
};

/// Levi–Malcev lifting along the derived series of the radical.
inline Subspace levi_malcev(const LieAlgebra& g, const Subspace& r) {
  const std::size_t n = g.dim();
  Subspace t = complement_in(Subspace::whole(n), r);
  const std::size_t s = t.dim();
  if (s == 0 || r.is_zero()) return t;

  // Quotient structure constants gamma_ab^d of g/r in the basis of t.
  const QMatrix joined = QMatrix::hcat(t.basis(), r.basis());
  const QMatrix jinv = inverse(joined);
  auto t_coords = [&](const QVector& x) {
    const QVector all = jinv * x;
    return QVector(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(s));
  };
  std::vector<QVector> x = t.vectors();
  std::vector<std::vector<QVector>> gamma(s, std::vector<QVector>(s));
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) gamma[a][b] = t_coords(g.bracket(x[a], x[b]));

  const auto chain = series(g, r, SeriesKind::derived);
  for (std::size_t level = 0; level + 1 <= chain.terms.size() && !chain.terms[level].is_zero(); ++level) {
    const Subspace& ri = chain.terms[level];
    const Subspace next = level + 1 < chain.terms.size() ? chain.terms[level + 1] : Subspace::zero(n);
    const QMatrix p = next.is_zero() ? QMatrix::identity(n) : next.annihilator();
    const std::size_t k = ri.dim();
    const QMatrix R = ri.basis();
    // Unknowns: y_a = R * Y[a*k .. a*k+k).
    QMatrix sys(0, s * k);
    QVector rhs;
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = a + 1; b < s; ++b) {
        QVector rho = g.bracket(x[a], x[b]);
        for (std::size_t d = 0; d < s; ++d)
          if (gamma[a][b][d] != 0) rho = sub(rho, scale(gamma[a][b][d], x[d]));
        // p * (rho + [x_a, R y_b] - [x_b, R y_a] - sum_d gamma_ab^d R y_d) = 0
        QMatrix block(p.rows(), s * k);
        const QMatrix adxa = p * g.ad(x[a]) * R;
        const QMatrix adxb = p * g.ad(x[b]) * R;
        const QMatrix pr = p * R;
        for (std::size_t i = 0; i < p.rows(); ++i)
          for (std::size_t c = 0; c < k; ++c) {
            block(i, b * k + c) += adxa(i, c);
            block(i, a * k + c) -= adxb(i, c);
            for (std::size_t d = 0; d < s; ++d)
              if (gamma[a][b][d] != 0) block(i, d * k + c) -= gamma[a][b][d] * pr(i, c);
          }
        sys = QMatrix::vcat(sys, block);
        const QVector prho = p * rho;
        for (const auto& v : prho) rhs.push_back(-v);
      }
    if (sys.rows() == 0) continue;
    auto y = solve(sys, rhs);
    if (!y) throw Error("Levi-Malcev lifting: linear system inconsistent");
    for (std::size_t a = 0; a < s; ++a) {
      QVector ya(k);
      for (std::size_t c = 0; c < k; ++c) ya[c] = (*y)[a * k + c];
      x[a] = add(x[a], R * ya);
    }
  }
  return Subspace(n, QMatrix::from_columns(n, x));
}

/// Exact evaluation of a polynomial (coefficients low to high) at a matrix.
inline QMatrix poly_at(const std::vector<Rational>& coeffs, const QMatrix& m) {
  QMatrix acc(m.rows(), m.cols());
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * m + coeffs[i] * QMatrix::identity(m.rows());
  return acc;
}

inline bool poly_divides(const std::vector<Rational>& divisor, std::vector<Rational> p,
                         std::vector<Rational>* quotient) {
  const std::size_t dd = divisor.size() - 1;
  if (p.size() < divisor.size()) return false;
  std::vector<Rational> q(p.size() - dd);
  for (std::size_t i = p.size(); i-- > dd;) {
    const Rational f = p[i] / divisor[dd];
    q[i - dd] = f;
    for (std::size_t j = 0; j <= dd; ++j) p[i - dd + j] -= f * divisor[j];
  }
  for (std::size_t i = 0; i < dd; ++i)
    if (p[i] != 0) return false;
  if (quotient) *quotient = std::move(q);
  return true;
}

/// Attempts to split a semisimple ideal (given by its structure as an algebra
/// and its embedding) into two ideals using an element phi of the centroid.
inline std::vector<Subspace> split_with_centroid(const LieAlgebra& ideal_alg, const Subspace& embed,
                                                 SplitMix& rng) {
  const std::size_t d = ideal_alg.dim();
  // Centroid = commutant of ad(ideal): solve incrementally generator by generator.
  std::vector<QMatrix> cent{};
  {
    std::vector<QMatrix> cur;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        QMatrix e(d, d);
        e(i, j) = 1;
        cur.push_back(e);
      }
    for (std::size_t a = 0; a < d && cur.size() > 1; ++a) {
      const QMatrix& ada = ideal_alg.ad_basis(a);
      QMatrix cols(d * d, cur.size());
      for (std::size_t t = 0; t < cur.size(); ++t) {
        const QVector f = flatten(cur[t] * ada - ada * cur[t]);
        for (std::size_t r = 0; r < f.size(); ++r) cols(r, t) = f[r];
      }
      const QMatrix ker = kernel(cols);
      std::vector<QMatrix> next;
      for (std::size_t c = 0; c < ker.cols(); ++c) {
        QMatrix m(d, d);
        for (std::size_t t = 0; t < cur.size(); ++t)
          if (ker(t, c) != 0) m = m + ker(t, c) * cur[t];
        next.push_back(std::move(m));
      }
      cur = std::move(next);
    }
    cent = std::move(cur);
  }
  if (cent.size() <= 1) return {embed};

  for (int attempt = 0; attempt < 6; ++attempt) {
    QMatrix phi(d, d);
    for (const auto& b : cent) phi = phi + Rational(rng.small(7)) * b;
    // Minimal polynomial of phi inside the centroid.
    IncrementalSpan span(d * d);
    std::vector<QVector> powers;
    QMatrix pw = QMatrix::identity(d);
    std::vector<Rational> minpoly;
    for (std::size_t deg = 0; deg <= cent.size(); ++deg) {
      const QVector f = flatten(pw);
      if (!span.insert(f)) {
        const QMatrix basis = QMatrix::from_columns(d * d, powers);
        auto coeffs = solve(basis, f);
        minpoly.assign(coeffs->begin(), coeffs->end());
        for (auto& cc : minpoly) cc = -cc;
        minpoly.push_back(1);
        break;
      }
      powers.push_back(f);
      pw = pw * phi;
    }
    if (minpoly.size() <= 2) continue;  // phi is scalar

    // Factor numerically, keep only factors that divide exactly.
    const std::size_t deg = minpoly.size() - 1;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
    for (std::size_t i = 1; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1;
    for (std::size_t i = 0; i < deg; ++i)
      companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -to_double(minpoly[i]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
    std::vector<std::vector<Rational>> factors;
    std::vector<Rational> rest = minpoly;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const std::complex<double> z = es.eigenvalues()(i);
      std::vector<Rational> cand;
      if (std::fabs(z.imag()) < 1e-9) {
        cand = {Rational(-rationalize(z.real(), 100000)), Rational(1)};
      } else if (z.imag() > 0) {
        cand = {rationalize(std::norm(z), 100000), Rational(-rationalize(2 * z.real(), 100000)), Rational(1)};
      } else {
        continue;
      }
      std::vector<Rational> q;
      if (rest.size() > cand.size() && poly_divides(cand, rest, &q)) {
        factors.push_back(cand);
        rest = std::move(q);
      }
    }
    if (rest.size() > 1) factors.push_back(rest);
    if (factors.size() < 2) continue;

    std::vector<Subspace> parts;
    std::size_t total = 0;
    for (const auto& f : factors) {
      const QMatrix ker = kernel(poly_at(f, phi));
      if (ker.cols() == 0) continue;
      parts.emplace_back(embed.ambient_dim(), embed.basis() * ker);
      total += ker.cols();
    }
    if (parts.size() >= 2 && total == d) return parts;
  }
  return {embed};
}

}  // namespace detail

/// Decomposes a semisimple subalgebra s of g into simple ideals (over Q).
/// Each part is certified to be an ideal of s and the sum to be direct.
inline std::vector<Subspace> simple_ideal_decomposition(const LieAlgebra& g, const Subspace& s) {
  if (s.is_zero()) return {};
  detail::SplitMix rng(0x5eed5eedULL);
  std::vector<Subspace> done;
  std::vector<Subspace> todo{s};
  while (!todo.empty()) {
    Subspace cur = todo.back();
    todo.pop_back();
    const LieAlgebra alg = subalgebra_structure(g, cur);
    auto parts = detail::split_with_centroid(alg, cur, rng);
    if (parts.size() == 1) {
      done.push_back(cur);
    } else {
      for (auto& p : parts) todo.push_back(std::move(p));
    }
  }
  Subspace total = Subspace::zero(g.dim());
  std::size_t dims = 0;
  for (const auto& p : done) {
    if (!s.contains(bracket_span(g, s, p))) throw Error("simple-ideal split certification failed: not an ideal");
    total = total + p;
    dims += p.dim();
  }
  if (total.dim() != s.dim() || dims != s.dim()) throw Error("simple-ideal split certification failed: not direct");
  return done;
}

inline bool is_semisimple(const LieAlgebra& g, const Subspace& s) {
  if (s.is_zero()) return true;
  const LieAlgebra alg = subalgebra_structure(g, s);
  return rank(alg.killing_form()) == alg.dim();
}

/// Levi decomposition. With `supplied`, checks that it is a Levi subalgebra
/// (verify mode); otherwise computes one by Levi–Malcev lifting.
inline LeviData levi_split(const LieAlgebra& g, const std::optional<Subspace>& supplied = std::nullopt) {
  const std::size_t n = g.dim();
  LeviData out;
  out.radical = radical(g);
  out.nilradical = nilradical(g);
  if (supplied) {
    const Subspace& s = *supplied;
    if (s.ambient_dim() != n) throw InputError("Levi subalgebra has wrong ambient dimension");
    if (!is_subalgebra(g, s)) throw PreconditionError("Levi verification: supplied subspace is not a subalgebra");
    if (!is_direct_sum(out.radical, s, n))
      throw PreconditionError("Levi verification: g is not the direct sum of radical and supplied subspace");
    if (!is_semisimple(g, s)) throw PreconditionError("Levi verification: supplied subalgebra is not semisimple");
    out.levi = s;
    out.levi_supplied = true;
  } else {
    out.levi = detail::levi_malcev(g, out.radical);
    if (!is_subalgebra(g, out.levi) || !is_direct_sum(out.radical, out.levi, n))
      throw Error("Levi-Malcev lifting failed certification; supply a Levi subalgebra");
  }
  const QMatrix b = g.killing_form();
  Subspace sc = Subspace::zero(n), snc = Subspace::zero(n);
  for (auto& ideal : simple_ideal_decomposition(g, out.levi)) {
    const bool compact = is_negative_definite(restricted_form(b, ideal));
    (compact ? sc : snc) = (compact ? sc : snc) + ideal;
    out.simple_ideals.push_back({std::move(ideal), compact});
  }
  out.compact_part = sc;
  out.noncompact_part = snc;
  return out;
}

// --- derivations ----------------------------------------------------------

/// Derivations D of g with A D + D^T A = 0 (A symmetric positive definite).
/// Matrices act on coordinate columns: column j of D is D(e_j).
inline std::vector<QMatrix> skew_derivations(const LieAlgebra& g, const QMatrix& a) {
  const std::size_t n = g.dim();
  if (a.rows() != n || a.cols() != n) throw InputError("skew_derivations: A has wrong shape");
  if (!(a == a.transpose()) || !is_positive_definite(a))
    throw PreconditionError("skew_derivations: A is not symmetric positive definite");
  auto var = [n](std::size_t k, std::size_t l) { return k * n + l; };
  std::vector<QVector> rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        // D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j], component k
        QVector row(n * n);
        for (std::size_t l = 0; l < n; ++l) {
          if (g.c(i, j, l) != 0) row[var(k, l)] += g.c(i, j, l);
          if (g.c(l, j, k) != 0) row[var(l, i)] -= g.c(l, j, k);
          if (g.c(i, l, k) != 0) row[var(l, j)] -= g.c(i, l, k);
        }
        if (!is_zero(row)) rows.push_back(std::move(row));
      }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q) {
      QVector row(n * n);
      for (std::size_t k = 0; k < n; ++k) {
        row[var(k, q)] += a(p, k);
        row[var(k, p)] += a(k, q);
      }
      if (!is_zero(row)) rows.push_back(std::move(row));
    }
  const QMatrix ker = rows.empty() ? QMatrix::identity(n * n) : kernel(QMatrix::from_rows(rows));
  std::vector<QMatrix> out;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    QMatrix d(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) d(k, l) = ker(var(k, l), c);
    out.push_back(std::move(d));
  }
  return out;
}

/// True when the span of the matrices is closed under the commutator.
inline bool is_closed_under_commutator(const std::vector<QMatrix>& mats) {
  if (mats.empty()) return true;
  const std::size_t n = mats.front().rows();
  std::vector<QVector> flat;
  for (const auto& m : mats) flat.push_back(detail::flatten(m));
  const QMatrix basis = QMatrix::from_columns(n * n, flat);
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      if (!solve(basis, detail::flatten(mats[i] * mats[j] - mats[j] * mats[i]))) return false;
  return true;
}

/// Semidirect product n ⋊ span(derivs): basis is n's basis followed by the
/// derivations; [D, x] = D x.
inline LieAlgebra semidirect_with_derivations(const LieAlgebra& nalg, const std::vector<QMatrix>& derivs,
                                             std::vector<std::string> deriv_labels = {}) {
  const std::size_t d = nalg.dim(), k = derivs.size(), n = d + k;
  std::vector<std::string> labels = nalg.labels();
  for (std::size_t a = 0; a < k; ++a)
    labels.push_back(a < deriv_labels.size() ? deriv_labels[a] : "D" + std::to_string(a + 1));
  std::vector<QVector> flat;
  for (const auto& m : derivs) flat.push_back(detail::flatten(m));
  const QMatrix dbasis = QMatrix::from_columns(d * d, flat);
  if (k > 0 && rank(dbasis) != k) throw InputError("derivations are linearly dependent");
  std::vector<Rational> c(n * n * n);
  auto set = [&](std::size_t i, std::size_t j, std::size_t l, const Rational& v) {
    c[(i * n + j) * n + l] = v;
    c[(j * n + i) * n + l] = -v;
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t l = 0; l < d; ++l) set(i, j, l, nalg.c(i, j, l));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < d; ++l) set(d + a, j, l, derivs[a](l, j));
    for (std::size_t b = a + 1; b < k; ++b) {
      auto coords = solve(dbasis, detail::flatten(derivs[a] * derivs[b] - derivs[b] * derivs[a]));
      if (!coords) throw PreconditionError("derivation span is not closed under the commutator");
      for (std::size_t e = 0; e < k; ++e) set(d + a, d + b, d + e, (*coords)[e]);
    }
  }
  return LieAlgebra(n, std::move(labels), std::move(c));
}

}  // namespace gofinsler

namespace gofinsler {

/// g1 ⊕ g2 with g1's basis first.
inline LieAlgebra direct_sum(const LieAlgebra& g1, const LieAlgebra& g2) {
  const std::size_t a = g1.dim(), b = g2.dim(), n = a + b;
  std::vector<std::string> labels = g1.labels();
  labels.insert(labels.end(), g2.labels().begin(), g2.labels().end());
  std::vector<Rational> c(n * n * n);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j)
      for (std::size_t k = 0; k < a; ++k) c[(i * n + j) * n + k] = g1.c(i, j, k);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t k = 0; k < b; ++k) c[((a + i) * n + a + j) * n + a + k] = g2.c(i, j, k);
  LieAlgebra out(n, std::move(labels), std::move(c));
  return out;
}

}  // namespace gofinsler
