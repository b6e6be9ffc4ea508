#pragma once

// Geodesic-orbit verdicts and the structure pipeline built on them.
// Sampled verdicts are "consistent", never "proven".

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gofinsler/algebras.hpp"
#include "gofinsler/homspace.hpp"
#include "gofinsler/liealg.hpp"
#include "gofinsler/minkowski.hpp"
#include "gofinsler/sampling.hpp"

namespace gofinsler {

/// Directions in m normalized to F = 1: basis and pair directions first, then
/// `count` quasi-random ones. The unnormalized rational direction is kept for
/// the first (basis/pair) block.
struct SampleSet {
  std::vector<Eigen::VectorXd> unit;
  std::size_t rational_prefix = 0;  // number of leading basis/pair directions
};

inline SampleSet unit_samples(const MinkowskiNorm& f, std::size_t count, std::uint64_t seed, bool include_basis_pairs) {
  SampleSet s;
  auto dirs = sample_directions(f.dim(), count, seed, include_basis_pairs);
  s.rational_prefix = include_basis_pairs ? basis_and_pair_directions(f.dim()).size() : 0;
  for (auto& d : dirs) s.unit.push_back(d / f.value(d));
  return s;
}

/// Coordinates 0/1 of the i-th basis/pair direction.
inline QVector rational_direction(std::size_t dim, std::size_t index) {
  if (index < dim) return unit_vector(dim, index);
  index -= dim;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      if (index == 0) return add(unit_vector(dim, i), unit_vector(dim, j));
      --index;
    }
  throw InputError("pair direction index out of range");
}

// ---------------------------------------------------------------------------
// GO check

struct GoSample {
  Eigen::VectorXd u;
  Eigen::VectorXd u_prime;
  double residual = 0;
  bool exact = false;
};

struct GoReport {
  std::size_t sample_count = 0;  // quasi-random samples requested
  std::uint64_t seed = 0;
  double tolerance = 0;
  std::vector<GoSample> samples;
  double max_residual = 0;
  std::size_t worst = 0;
  bool consistent = true;
  std::optional<Eigen::VectorXd> witness;
};

inline GoReport go_check(const HomogeneousSpace& s, std::size_t sample_count = 200, double tol = 1e-9,
                         std::uint64_t seed = 0) {
  s.require_valid();
  GoReport r;
  r.sample_count = sample_count;
  r.seed = seed;
  r.tolerance = tol;
  if (s.dim_m() == 0) return r;
  const SampleSet set = unit_samples(s.norm(), sample_count, seed, true);
  for (std::size_t i = 0; i < set.unit.size(); ++i) {
    GoSample gs;
    gs.u = set.unit[i];
    std::optional<ExactGeodesicVector> ex;
    if (i < set.rational_prefix) ex = geodesic_vector_solve_exact(s, rational_direction(s.dim_m(), i));
    if (ex) {
      // u' scales like u: rescale the rational solution to the unit sample
      const double scale = gs.u.norm() / to_eigen(rational_direction(s.dim_m(), i)).norm();
      gs.u_prime = to_eigen(ex->u_prime) * scale;
      gs.residual = to_double(ex->residual);
      gs.exact = true;
    } else {
      const GeodesicVector gv = geodesic_vector_solve(s, gs.u);
      gs.u_prime = gv.u_prime;
      gs.residual = gv.residual;
    }
    if (i == 0 || gs.residual > r.max_residual) {
      r.max_residual = gs.residual;
      r.worst = i;
    }
    r.samples.push_back(std::move(gs));
  }
  r.consistent = r.max_residual < tol;
  if (!r.consistent) r.witness = r.samples[r.worst].u;
  return r;
}

// ---------------------------------------------------------------------------
// Totally geodesic subalgebras

struct TotallyGeodesicReport {
  bool applicable = true;
  std::string reason;
  bool totally_geodesic = false;
  double max_residual = 0;
  std::optional<Eigen::VectorXd> witness;  // m-coordinates
  std::size_t samples = 0;
};

/// The ⟨·,·⟩_y-norm (relative to F(y)²) of the part of η(y) outside g' ∩ m,
/// over samples y in g' ∩ m.
inline TotallyGeodesicReport totally_geodesic_check(const HomogeneousSpace& s, const Subspace& gprime,
                                                    std::size_t sample_count = 100, double tol = 1e-9,
                                                    std::uint64_t seed = 0) {
  s.require_valid();
  TotallyGeodesicReport r;
  SubspaceSpace d;
  try {
    d = decompose_subalgebra(s, gprime);
  } catch (const PreconditionError& e) {
    r.applicable = false;
    r.reason = e.what();
    return r;
  }
  r.totally_geodesic = true;
  const std::size_t k = d.m_part.dim();
  if (k == 0) {
    r.reason = "g' meets m trivially";
    return r;
  }
  const Eigen::MatrixXd emb = d.m_embedding.to_eigen();
  auto dirs = sample_directions(k, sample_count, seed, true);
  r.samples = dirs.size();
  for (const auto& z : dirs) {
    Eigen::VectorXd y = emb * z;
    y /= s.norm().value(y);
    const NormJet j = s.norm().jet(y);
    const Eigen::VectorXd eta = spray_eta(s, y, j);
    const Eigen::MatrixXd gk = emb.transpose() * j.hessian * emb;
    const Eigen::VectorXd c = gk.ldlt().solve(emb.transpose() * j.hessian * eta);
    const Eigen::VectorXd rest = eta - emb * c;
    const double v = std::sqrt(std::max(0.0, rest.dot(j.hessian * rest))) / (j.value * j.value);
    if (v > r.max_residual) {
      r.max_residual = v;
      r.witness = y;
    }
  }
  r.totally_geodesic = r.max_residual < tol;
  return r;
}

// ---------------------------------------------------------------------------
// Constant-length Killing fields from abelian ideals

struct KillingLengthReport {
  double derivative_max = 0;  // max |⟨u, [u, v]_m⟩_u| / F(u)²
  double flow_max = 0;        // max |F(pr_m(e^{t ad v} u)) - F(u)| / F(u)
  bool derivative_ok = false;
  bool flow_ok = false;
  bool ok() const { return derivative_ok && flow_ok; }
};

inline KillingLengthReport constant_length_killing_check(const HomogeneousSpace& s, const Subspace& a,
                                                         std::size_t sample_count = 100, double tol = 1e-8,
                                                         std::optional<Subspace> generators = std::nullopt,
                                                         std::uint64_t seed = 0) {
  s.require_valid();
  const LieAlgebra& g = s.algebra();
  if (a.ambient_dim() != g.dim()) throw InputError("subspace has wrong ambient dimension");
  if (a.is_zero()) throw PreconditionError("abelian ideal is zero");
  if (!is_ideal(g, a)) throw PreconditionError("subspace is not an ideal");
  if (!is_abelian(g, a)) throw PreconditionError("ideal is not abelian");
  if (!intersect(a, s.isotropy()).is_zero()) throw PreconditionError("ideal meets the isotropy");
  if (!s.complement().contains(a)) throw PreconditionError("ideal is not contained in m");
  const Subspace gens = generators ? *generators : nilradical(g);

  KillingLengthReport r;
  std::vector<QMatrix> ad_gens;
  for (const auto& v : gens.vectors()) ad_gens.push_back(g.ad(v));
  QMatrix a_in_m(s.dim_m(), a.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const QVector c = s.project_m(a.vector(j));
    for (std::size_t i = 0; i < s.dim_m(); ++i) a_in_m(i, j) = c[i];
  }
  const Eigen::MatrixXd emb = a_in_m.to_eigen();
  const Eigen::MatrixXd mbasis = s.complement().basis().to_eigen();
  const Eigen::MatrixXd split = s.split_matrix().to_eigen();
  const Eigen::Index k = static_cast<Eigen::Index>(s.dim_m());
  auto pr_m = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return (split * x).tail(k); };

  const auto dirs = sample_directions(a.dim(), sample_count, seed, true);
  // (i) derivative condition
  for (const auto& z : dirs) {
    Eigen::VectorXd u = emb * z;
    u /= s.norm().value(u);
    const NormJet j = s.norm().jet(u);
    const Eigen::VectorXd ug = mbasis * u;
    for (const auto& ad : ad_gens) {
      // [u, v] = -ad(v) u
      const Eigen::VectorXd br = pr_m(-(ad.to_eigen() * ug));
      r.derivative_max = std::max(r.derivative_max, std::abs(j.gradient.dot(br)) / (j.value * j.value));
    }
  }
  // (ii) finite flows along every basis vector of g
  std::vector<Eigen::MatrixXd> ad_all;
  for (std::size_t i = 0; i < g.dim(); ++i) ad_all.push_back(g.ad_basis(i).to_eigen());
  const std::size_t flow_samples = std::min<std::size_t>(dirs.size(), 20);
  for (std::size_t si = 0; si < flow_samples; ++si) {
    Eigen::VectorXd u = emb * dirs[si];
    u /= s.norm().value(u);
    const Eigen::VectorXd ug = mbasis * u;
    for (const auto& ad : ad_all)
      for (int step = -10; step <= 10; ++step) {
        const double t = step / 10.0;
        const Eigen::MatrixXd e = (t * ad).exp();
        const double fv = s.norm().value(pr_m(e * ug));
        r.flow_max = std::max(r.flow_max, std::abs(fv - 1.0));
      }
  }
  r.derivative_ok = r.derivative_max < tol;
  r.flow_ok = r.flow_max < tol;
  return r;
}

// ---------------------------------------------------------------------------
// Quotients by ideals

struct QuotientResult {
  Subspace h2;                        // largest ideal of g inside h1 + h
  QuotientAlgebra quotient;           // g / h2
  Subspace isotropy;                  // (h1 + h) / h2, quotient coordinates
  Subspace complement;                // m', quotient coordinates
  std::optional<LinearSubmersion> submersion;  // m -> m'
  std::optional<HomogeneousSpace> space;       // empty when the quotient is a point
  bool is_point() const { return !space.has_value(); }
};

inline QuotientResult quotient_by_normal(const HomogeneousSpace& s, const Subspace& h1, SpaceAssemblyOptions opt = {}) {
  const LieAlgebra& g = s.algebra();
  if (h1.ambient_dim() != g.dim()) throw InputError("ideal has wrong ambient dimension");
  if (!is_ideal(g, h1)) throw PreconditionError("h1 is not an ideal");
  QuotientResult r;
  const Subspace h1h = h1 + s.isotropy();
  r.h2 = largest_ideal_in(g, h1h);
  r.quotient = quotient_algebra(g, r.h2);
  const LieAlgebra& q = r.quotient.algebra;
  const std::size_t qn = q.dim();
  std::vector<QVector> iso;
  for (const auto& v : h1h.vectors()) iso.push_back(r.quotient.projection * v);
  r.isotropy = Subspace::span(qn, iso);
  if (r.isotropy.dim() == qn) {
    r.complement = Subspace::zero(qn);
    return r;
  }
  r.complement = reductive_complement(q, r.isotropy);
  // l: m -> m' is x -> pr_{m'}(π(x))
  const QMatrix split = inverse(QMatrix::hcat(r.isotropy.basis(), r.complement.basis()));
  const std::size_t k = s.dim_m(), k2 = r.complement.dim(), p2 = r.isotropy.dim();
  QMatrix l(k2, k);
  for (std::size_t j = 0; j < k; ++j) {
    const QVector c = split * (r.quotient.projection * s.complement().vector(j));
    for (std::size_t i = 0; i < k2; ++i) l(i, j) = c[p2 + i];
  }
  r.submersion.emplace(l.to_eigen(), s.norm());
  r.space.emplace(q, r.isotropy, r.complement, quotient_norm(*r.submersion), opt);
  return r;
}

// ---------------------------------------------------------------------------
// Fixed-point reduction

inline HomogeneousSpace fixed_point_reduction(const HomogeneousSpace& s, const Subspace& l, SpaceAssemblyOptions opt = {}) {
  const LieAlgebra& g = s.algebra();
  if (l.ambient_dim() != g.dim()) throw InputError("subspace has wrong ambient dimension");
  if (l.is_zero()) return s;
  if (!s.isotropy().contains(l)) throw PreconditionError("L is not contained in the isotropy");
  if (!is_subalgebra(g, l)) throw PreconditionError("L is not a subalgebra");
  const Inertia in = inertia(restricted_form(g.killing_form(), l));
  if (in.positive != 0) throw PreconditionError("L is not of compact type (Killing form not negative semidefinite)");
  return restrict_space(s, centralizer(g, l), opt);
}

// ---------------------------------------------------------------------------
// Structure pipeline

enum class ThetaSource { supplied, realization, derived_from_isotropy, none };

inline const char* theta_source_name(ThetaSource t) {
  switch (t) {
    case ThetaSource::supplied: return "supplied";
    case ThetaSource::realization: return "realization";
    case ThetaSource::derived_from_isotropy: return "derived_from_isotropy";
    case ThetaSource::none: return "none";
  }
  return "?";
}

struct ThetaChecks {
  bool preserves_s_nc = false;
  bool involution = false;
  bool automorphism = false;
  bool definite = false;  // B(x, θx) negative definite on s_nc
  bool ok() const { return preserves_s_nc && involution && automorphism && definite; }
};

struct ProductSplit {
  bool applies = false;
  std::string reason;
  Subspace g1, h1, g2, h2;
};

struct StructureReport {
  LeviData levi;
  ThetaSource theta_source = ThetaSource::none;
  ThetaChecks theta_checks;
  Subspace k_nc, k_nc_derived, k_nc_center, h_nc, m_base;
  bool snc_commutes_with_radical = false;
  bool isotropy_matches_k_nc = false;
  bool base_symmetric = false;
  Subspace fiber_algebra;
  std::optional<std::size_t> fiber_step_size;  // of the nilradical; nullopt never happens for a nilradical
  ProductSplit product;
  std::optional<bool> go_consistent;
  /// fiber_step_size <= 2 whenever the attached verdict is consistent
  bool step_bound_ok = true;
};

namespace detail {

/// Matrix of θ restricted to s (in s's basis); nullopt if θ does not map s to s.
inline std::optional<QMatrix> restrict_map(const QMatrix& theta, const Subspace& s) {
  auto c = solve(s.basis(), theta * s.basis());
  if (!c) return std::nullopt;
  return *c;
}

}  // namespace detail

/// `theta` acts on g (only its action on s_nc matters). Without one, θ comes
/// from a matrix realization (X -> -X^T) or, failing that, from h_nc.
inline StructureReport structure_pipeline(const HomogeneousSpace& s, std::optional<QMatrix> theta = std::nullopt,
                                          std::optional<Subspace> levi_hint = std::nullopt,
                                          std::optional<bool> go_consistent = std::nullopt) {
  const LieAlgebra& g = s.algebra();
  const std::size_t n = g.dim();
  StructureReport r;
  r.go_consistent = go_consistent;
  r.levi = levi_split(g, levi_hint);
  const Subspace& snc = r.levi.noncompact_part;
  const Subspace& r_ = r.levi.radical;
  const Subspace scr = r.levi.compact_part + r_;

  // h_nc: s_nc-component of h along s_c + r
  {
    std::vector<QVector> parts;
    if (!snc.is_zero()) {
      const QMatrix inv = inverse(QMatrix::hcat(snc.basis(), scr.basis()));
      for (const auto& v : s.isotropy().vectors()) {
        const QVector c = inv * v;
        parts.push_back(snc.basis() * QVector(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(snc.dim())));
      }
    }
    r.h_nc = Subspace::span(n, parts);
  }

  if (theta) {
    r.theta_source = ThetaSource::supplied;
  } else if (g.realization() && !snc.is_zero()) {
    try {
      theta = algebras::transpose_involution(g);
      r.theta_source = ThetaSource::realization;
    } catch (const PreconditionError&) {
    }
  }
  if (!theta && !snc.is_zero()) {
    // +1 on h_nc, -1 on its Killing-orthogonal complement in s_nc; identity elsewhere
    const LieAlgebra sa = subalgebra_structure(g, snc);
    const QMatrix hc = snc.coordinates(r.h_nc.basis());
    const Subspace hs(snc.dim(), hc);
    const QMatrix perp = kernel(hc.transpose() * sa.killing_form());
    if (hs.dim() + perp.cols() == snc.dim() && rank(QMatrix::hcat(hc, perp)) == snc.dim()) {
      const QMatrix basis = QMatrix::hcat(QMatrix::hcat(snc.basis() * hc, snc.basis() * perp), scr.basis());
      QMatrix diag = QMatrix::identity(n);
      for (std::size_t i = hs.dim(); i < snc.dim(); ++i) diag(i, i) = -1;
      theta = basis * diag * inverse(basis);
      r.theta_source = ThetaSource::derived_from_isotropy;
    }
  }

  if (!snc.is_zero() && theta) {
    if (theta->rows() != n || theta->cols() != n) throw InputError("Cartan involution has wrong shape");
    auto t = detail::restrict_map(*theta, snc);
    r.theta_checks.preserves_s_nc = t.has_value();
    if (t) {
      const std::size_t d = snc.dim();
      r.theta_checks.involution = (*t * *t) == QMatrix::identity(d);
      const LieAlgebra sa = subalgebra_structure(g, snc);
      bool aut = true;
      for (std::size_t i = 0; i < d && aut; ++i)
        for (std::size_t j = i + 1; j < d && aut; ++j)
          aut = (*t * sa.bracket(unit_vector(d, i), unit_vector(d, j))) == sa.bracket(t->col(i), t->col(j));
      r.theta_checks.automorphism = aut;
      r.theta_checks.definite = is_negative_definite(sa.killing_form() * *t);
      const QMatrix plus = kernel(*t - QMatrix::identity(d));
      const QMatrix minus = kernel(*t + QMatrix::identity(d));
      r.k_nc = Subspace(n, snc.basis() * plus);
      r.m_base = Subspace(n, snc.basis() * minus);
    }
  }
  if (!snc.is_zero() && !r.theta_checks.ok())
    throw PreconditionError(std::string("Cartan involution failed verification:") +
                            (r.theta_checks.preserves_s_nc ? "" : " does not preserve s_nc;") +
                            (r.theta_checks.involution ? "" : " not an involution;") +
                            (r.theta_checks.automorphism ? "" : " not an automorphism;") +
                            (r.theta_checks.definite ? "" : " B(x, theta x) not negative definite;"));
  if (snc.is_zero()) {
    r.k_nc = r.m_base = Subspace::zero(n);
    r.theta_checks = {true, true, true, true};
  }
  r.k_nc_derived = derived(g, r.k_nc);
  r.k_nc_center = center_of(g, r.k_nc);
  r.snc_commutes_with_radical = bracket_span(g, snc, r_).is_zero();
  r.isotropy_matches_k_nc = r.h_nc == r.k_nc;
  r.base_symmetric = r.k_nc.contains(bracket_span(g, r.m_base, r.m_base)) &&
                     r.m_base.contains(bracket_span(g, r.k_nc, r.m_base)) && is_subalgebra(g, r.k_nc);
  r.fiber_algebra = r.levi.compact_part + r.k_nc_center + r_;
  r.fiber_step_size = step_size(g, r.levi.nilradical);
  if (go_consistent && *go_consistent) r.step_bound_ok = r.fiber_step_size && *r.fiber_step_size <= 2;

  if (!r.k_nc_center.is_zero()) {
    r.product.reason = "k_nc has nonzero center";
  } else {
    r.product.applies = true;
    r.product.g1 = snc;
    r.product.h1 = r.k_nc;
    r.product.g2 = scr;
    r.product.h2 = intersect(s.isotropy(), scr);
  }
  return r;
}

/// Name of s_nc from the dimensions of its simple ideals. A noncompact
/// simple real algebra of dimension 3 is sl(2,R) and of dimension 6 is
/// so(3,1); larger ones are only reported by dimension.
inline std::string noncompact_part_name(const LeviData& l) {
  std::string out;
  for (const auto& s : l.simple_ideals) {
    if (s.compact) continue;
    if (!out.empty()) out += " + ";
    const std::size_t d = s.ideal.dim();
    out += d == 3 ? "sl(2,R)" : d == 6 ? "so(3,1)" : "simple(" + std::to_string(d) + ")";
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Isometry extension of nilmanifolds

struct ExtensionResult {
  std::vector<QMatrix> derivations;  // basis of the norm-preserving skew derivations
  std::size_t skew_dim = 0;          // dimension before the norm filter
  HomogeneousSpace space;
};

namespace detail {

/// Row-reduce the rows of `m` in floating point (partial pivoting).
inline Eigen::MatrixXd float_rref(Eigen::MatrixXd m, double tol) {
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv = row;
    for (Eigen::Index i = row; i < m.rows(); ++i)
      if (std::abs(m(i, col)) > std::abs(m(piv, col))) piv = i;
    if (std::abs(m(piv, col)) < tol) continue;
    m.row(piv).swap(m.row(row));
    m.row(row) /= m(row, col);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != row) m.row(i) -= m(i, col) * m.row(row);
    ++row;
  }
  return m.topRows(row);
}

}  // namespace detail

inline ExtensionResult nilmanifold_isometry_extension(const LieAlgebra& nalg, const MinkowskiNorm& f, const QMatrix& a_ref,
                                                      std::size_t sample_count = 200, std::uint64_t seed = 0,
                                                      double tol = 1e-9) {
  const std::size_t d = nalg.dim();
  if (f.dim() != d) throw InputError("norm dimension differs from the algebra dimension");
  if (!is_nilpotent(nalg, Subspace::whole(d))) throw PreconditionError("algebra is not nilpotent");
  const std::vector<QMatrix> skew = skew_derivations(nalg, a_ref);
  ExtensionResult out;
  out.skew_dim = skew.size();
  std::vector<QMatrix> kept;
  if (!skew.empty()) {
    const auto fs = unit_samples(f, sample_count, seed, true);
    std::vector<Eigen::MatrixXd> sd;
    for (const auto& m : skew) sd.push_back(m.to_eigen());
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(fs.unit.size()), static_cast<Eigen::Index>(skew.size()));
    for (std::size_t i = 0; i < fs.unit.size(); ++i) {
      const NormJet j = f.jet(fs.unit[i]);
      for (std::size_t k = 0; k < skew.size(); ++k)
        rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j.gradient.dot(sd[k] * fs.unit[i]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > 1e-8 * top) ++r;
    const Eigen::MatrixXd null = svd.matrixV().rightCols(static_cast<Eigen::Index>(skew.size()) - r);
    if (null.cols() > 0) {
      const Eigen::MatrixXd red = detail::float_rref(null.transpose(), 1e-8);
      for (Eigen::Index i = 0; i < red.rows(); ++i) {
        QMatrix m(d, d);
        for (Eigen::Index k = 0; k < red.cols(); ++k) {
          const Rational c = rationalize(red(i, k), 10000);
          if (c != 0) m = m + c * skew[static_cast<std::size_t>(k)];
        }
        kept.push_back(m);
      }
    }
  }
  if (!is_closed_under_commutator(kept))
    throw NumericalError("norm-preserving derivations are not closed under the commutator");
  LieAlgebra g = semidirect_with_derivations(nalg, kept);
  const std::size_t n = g.dim();
  std::vector<QVector> hv, mv;
  for (std::size_t i = 0; i < d; ++i) mv.push_back(unit_vector(n, i));
  for (std::size_t i = d; i < n; ++i) hv.push_back(unit_vector(n, i));
  SpaceAssemblyOptions opt{sample_count, seed + 1, tol};  // fresh samples for the re-test
  HomogeneousSpace space(std::move(g), Subspace::span(n, hv), Subspace(n, QMatrix::from_columns(n, mv)), f, opt);
  if (!space.invariance().ok)
    throw NumericalError("norm-preserving derivations fail the invariance re-test on fresh samples");
  out.derivations = std::move(kept);
  out.space = std::move(space);
  return out;
}

}  // namespace gofinsler
