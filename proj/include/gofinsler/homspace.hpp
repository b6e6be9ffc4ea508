#pragma once

// Homogeneous Finsler spaces (g, h, m, F): the reductive decomposition, the
// spray vector field η, geodesic vectors and the body geodesic ODE.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gofinsler/liealg.hpp"
#include "gofinsler/minkowski.hpp"

namespace gofinsler {

/// m = {x : B(x, h) = 0}. Requires B nondegenerate on h.
inline Subspace reductive_complement(const LieAlgebra& g, const Subspace& h) {
  const std::size_t n = g.dim();
  if (h.is_zero()) return Subspace::whole(n);
  const QMatrix b = g.killing_form();
  if (rank(restricted_form(b, h)) != h.dim())
    throw PreconditionError("Killing form is degenerate on the isotropy; give an explicit complement");
  Subspace out(n, kernel(h.basis().transpose() * b));
  if (!is_direct_sum(h, out, n)) throw PreconditionError("Killing-orthogonal complement is not a complement");
  if (!out.contains(bracket_span(g, h, out))) throw PreconditionError("Killing-orthogonal complement is not h-invariant");
  return out;
}

struct SpaceAssemblyOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

class HomogeneousSpace {
 public:
  HomogeneousSpace() = default;

  /// Checks the reductive decomposition exactly (throws PreconditionError),
  /// then runs the norm validation and the Ad(h)-invariance test and records
  /// their reports. `complement` = nullopt means Killing-orthogonal.
  HomogeneousSpace(LieAlgebra g, Subspace h, std::optional<Subspace> complement, MinkowskiNorm norm,
                   SpaceAssemblyOptions opt = {})
      : g_(std::move(g)), h_(std::move(h)), norm_(std::move(norm)) {
    const std::size_t n = g_.dim();
    if (h_.ambient_dim() != n) throw InputError("isotropy has wrong ambient dimension");
    if (!is_subalgebra(g_, h_)) throw PreconditionError("isotropy is not a subalgebra");
    complement_auto_ = !complement;
    m_ = complement ? std::move(*complement) : reductive_complement(g_, h_);
    if (m_.ambient_dim() != n) throw InputError("complement has wrong ambient dimension");
    if (!is_direct_sum(h_, m_, n)) throw PreconditionError("g is not the direct sum of isotropy and complement");
    if (!m_.contains(bracket_span(g_, h_, m_))) throw PreconditionError("[h, m] is not contained in m");
    if (norm_.dim() != m_.dim()) throw InputError("norm dimension differs from the complement dimension");
    build_tables();
    if (m_.dim() > 0) {
      validation_ = validate(norm_, opt.samples, opt.seed, opt.tol);
      if (validation_.ok) {
        invariance_ = ad_invariance_check(norm_, h_action_, opt.samples, opt.seed, opt.tol);
      } else {
        invariance_.ok = false;
        invariance_.skipped = true;
      }
    }
  }

  const LieAlgebra& algebra() const noexcept { return g_; }
  const Subspace& isotropy() const noexcept { return h_; }
  const Subspace& complement() const noexcept { return m_; }
  const MinkowskiNorm& norm() const noexcept { return norm_; }
  bool complement_is_killing_orthogonal() const noexcept { return complement_auto_; }
  std::size_t dim_m() const noexcept { return m_.dim(); }
  std::size_t dim_h() const noexcept { return h_.dim(); }
  const NormValidation& norm_validation() const noexcept { return validation_; }
  const InvarianceReport& invariance() const noexcept { return invariance_; }
  bool valid() const noexcept { return validation_.ok && invariance_.ok; }

  /// (h-coordinates; m-coordinates) of a g-vector.
  std::pair<QVector, QVector> split(const QVector& x) const {
    const QVector c = split_ * x;
    return {QVector(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(h_.dim())),
            QVector(c.begin() + static_cast<std::ptrdiff_t>(h_.dim()), c.end())};
  }
  /// m-coordinates of pr_m(x).
  QVector project_m(const QVector& x) const { return split(x).second; }
  /// g-vector of pr_m(x).
  QVector project_m_vector(const QVector& x) const { return m_.basis() * project_m(x); }
  QVector m_vector(const QVector& mcoords) const { return m_.basis() * mcoords; }

  const QMatrix& split_matrix() const noexcept { return split_; }
  /// Float versions: [v_i, v_j]_m = sum_k bracket_m(i, j)_k v_k.
  const Eigen::VectorXd& bracket_m(std::size_t i, std::size_t j) const { return mm_[i * m_.dim() + j]; }
  /// u -> [w_a, u]_m in m-coordinates, for the h-basis vector w_a.
  const std::vector<Eigen::MatrixXd>& h_action() const noexcept { return h_action_; }
  /// u -> [u, v]_m as a matrix acting on v (m-coordinates).
  Eigen::MatrixXd ad_m(const Eigen::VectorXd& u) const {
    const std::size_t k = m_.dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      if (u(static_cast<Eigen::Index>(i)) != 0)
        for (std::size_t j = 0; j < k; ++j) out.col(static_cast<Eigen::Index>(j)) += u(static_cast<Eigen::Index>(i)) * bracket_m(i, j);
    return out;
  }
  /// Exact m-coordinates of [v_i, v_j]_m.
  const QVector& bracket_m_exact(std::size_t i, std::size_t j) const { return mm_exact_[i * m_.dim() + j]; }
  const std::vector<QMatrix>& h_action_exact() const noexcept { return h_action_exact_; }

  /// Throws PreconditionError unless the norm and invariance checks passed.
  void require_valid() const {
    if (!validation_.ok) throw PreconditionError("norm failed validation: " + validation_.violations.front().condition);
    if (!invariance_.ok)
      throw PreconditionError("norm is not Ad(h)-invariant (violation " + std::to_string(invariance_.max_violation) + ")");
  }

 private:
  void build_tables() {
    const std::size_t k = m_.dim(), p = h_.dim();
    split_ = inverse(QMatrix::hcat(h_.basis(), m_.basis()));
    mm_exact_.assign(k * k, QVector(k));
    mm_.assign(k * k, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k)));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        mm_exact_[i * k + j] = project_m(g_.bracket(m_.vector(i), m_.vector(j)));
        mm_[i * k + j] = to_eigen(mm_exact_[i * k + j]);
      }
    for (std::size_t a = 0; a < p; ++a) {
      QMatrix w(k, k);
      for (std::size_t j = 0; j < k; ++j) {
        const QVector c = project_m(g_.bracket(h_.vector(a), m_.vector(j)));
        for (std::size_t i = 0; i < k; ++i) w(i, j) = c[i];
      }
      h_action_exact_.push_back(w);
      h_action_.push_back(w.to_eigen());
    }
  }

  LieAlgebra g_;
  Subspace h_, m_;
  MinkowskiNorm norm_;
  bool complement_auto_ = false;
  QMatrix split_;
  std::vector<QVector> mm_exact_;
  std::vector<Eigen::VectorXd> mm_;
  std::vector<QMatrix> h_action_exact_;
  std::vector<Eigen::MatrixXd> h_action_;
  NormValidation validation_;
  InvarianceReport invariance_;
};

// ---------------------------------------------------------------------------
// Spray

/// η(y) from g(y) η = w, w_j = ⟨y, [v_j, y]_m⟩_y = p . [v_j, y]_m with p = grad(½F²).
inline Eigen::VectorXd spray_eta(const HomogeneousSpace& s, const Eigen::VectorXd& y, const NormJet& j) {
  // [v_j, y]_m = -[y, v_j]_m = -(ad_m(y) e_j)
  const Eigen::VectorXd w = -(s.ad_m(y).transpose() * j.gradient);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(j.hessian);
  const Eigen::VectorXd eta = ldlt.solve(w);
  if (!eta.allFinite()) throw NumericalError("spray field is not finite");
  return eta;
}

inline Eigen::VectorXd spray_eta(const HomogeneousSpace& s, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != s.dim_m()) throw InputError("vector has wrong dimension for m");
  if (y.isZero(0)) throw PreconditionError("spray requested at y = 0");
  return spray_eta(s, y, s.norm().jet(y));
}

// ---------------------------------------------------------------------------
// Geodesic vectors

struct GeodesicVector {
  Eigen::VectorXd u_prime;  ///< h-coordinates
  double residual = 0;      ///< max_j |⟨u, [u + u', v_j]_m⟩_u| / F(u)²
  bool exact = false;
};

/// Least-squares u' in h with ⟨u, [u', v_j]_m⟩_u = -⟨u, [u, v_j]_m⟩_u for all j.
inline GeodesicVector geodesic_vector_solve(const HomogeneousSpace& s, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != s.dim_m()) throw InputError("vector has wrong dimension for m");
  if (u.isZero(0)) throw PreconditionError("geodesic vector requested at u = 0");
  const NormJet j = s.norm().jet(u);
  const Eigen::Index k = u.size(), p = static_cast<Eigen::Index>(s.dim_h());
  const Eigen::VectorXd rhs = -(s.ad_m(u).transpose() * j.gradient);
  GeodesicVector out;
  out.u_prime = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd res = -rhs;
  if (p > 0) {
    Eigen::MatrixXd mat(k, p);
    for (Eigen::Index a = 0; a < p; ++a) mat.col(a) = s.h_action()[static_cast<std::size_t>(a)].transpose() * j.gradient;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(mat);
    cod.setThreshold(1e-12);
    out.u_prime = cod.solve(rhs);
    res = mat * out.u_prime - rhs;
  }
  out.residual = (k ? res.cwiseAbs().maxCoeff() : 0.0) / (j.value * j.value);
  return out;
}

struct ExactGeodesicVector {
  QVector u_prime;
  Rational residual;  ///< max_j |residual_j| / F(u)², exact
};

/// Exact version for euclidean norms with rational A and rational u: solves
/// the normal equations and takes the minimum-norm solution.
inline std::optional<ExactGeodesicVector> geodesic_vector_solve_exact(const HomogeneousSpace& s, const QVector& u) {
  const MinkowskiNorm& f = s.norm();
  if (f.family() != NormFamily::euclidean || !f.exact_A()) return std::nullopt;
  if (u.size() != s.dim_m()) throw InputError("vector has wrong dimension for m");
  if (is_zero(u)) throw PreconditionError("geodesic vector requested at u = 0");
  const std::size_t k = s.dim_m(), p = s.dim_h();
  const QVector grad = *f.exact_A() * u;
  const Rational f2 = dot(u, grad);
  // ad_m(u) column j = [u, v_j]_m
  QVector rhs(k);
  for (std::size_t jj = 0; jj < k; ++jj) {
    QVector col(k);
    for (std::size_t i = 0; i < k; ++i)
      if (u[i] != 0) col = add(col, scale(u[i], s.bracket_m_exact(i, jj)));
    rhs[jj] = -dot(grad, col);
  }
  ExactGeodesicVector out;
  out.u_prime = QVector(p);
  QVector res = scale(-1, rhs);
  if (p > 0) {
    QMatrix mat(k, p);
    for (std::size_t a = 0; a < p; ++a) {
      const QVector c = s.h_action_exact()[a].transpose() * grad;
      for (std::size_t i = 0; i < k; ++i) mat(i, a) = c[i];
    }
    const QMatrix mt = mat.transpose();
    auto sol = solve(mt * mat, mt * rhs);
    if (!sol) throw Error("normal equations are inconsistent");
    // remove the kernel component for the minimum-norm solution
    const Subspace rowspace = Subspace::span(mt);
    QVector x = *sol;
    if (!rowspace.is_zero() && rowspace.dim() < p) {
      const QMatrix rb = rowspace.basis();
      x = rb * *solve(rb.transpose() * rb, rb.transpose() * x);
    } else if (rowspace.is_zero()) {
      x = QVector(p);
    }
    out.u_prime = x;
    res = sub(mat * x, rhs);
  }
  Rational worst = 0;
  for (const auto& r : res) worst = std::max(worst, r < 0 ? Rational(-r) : r);
  out.residual = worst / f2;
  return out;
}

/// Distance (in ⟨·,·⟩_u, relative to F(u)²) from η(u) to span{[w_a, u]_m}.
inline double orbit_tangency_residual(const HomogeneousSpace& s, const Eigen::VectorXd& u) {
  const NormJet j = s.norm().jet(u);
  const Eigen::VectorXd eta = spray_eta(s, u, j);
  const Eigen::Index p = static_cast<Eigen::Index>(s.dim_h());
  Eigen::VectorXd rest = eta;
  if (p > 0) {
    Eigen::MatrixXd t(u.size(), p);
    for (Eigen::Index a = 0; a < p; ++a) t.col(a) = s.h_action()[static_cast<std::size_t>(a)] * u;
    const Eigen::LLT<Eigen::MatrixXd> llt(j.hessian);
    const Eigen::MatrixXd l = llt.matrixU();  // g = U^T U
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(l * t);
    cod.setThreshold(1e-12);
    const Eigen::VectorXd c = cod.solve(l * eta);
    rest = eta - t * c;
  }
  return std::sqrt(std::max(0.0, rest.dot(j.hessian * rest))) / (j.value * j.value);
}

// ---------------------------------------------------------------------------
// Body geodesic ODE

struct SprayTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> speed;
  double max_speed_drift = 0;
};

/// Classical RK4 for du/dt = -η(u).
inline SprayTrajectory integrate_spray(const HomogeneousSpace& s, const Eigen::VectorXd& y0, double T, double dt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw InputError("time step must be positive");
  if (!(T >= 0) || !std::isfinite(T)) throw InputError("duration must be nonnegative");
  if (static_cast<std::size_t>(y0.size()) != s.dim_m()) throw InputError("initial vector has wrong dimension");
  if (y0.isZero(0)) throw PreconditionError("initial vector is zero");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  const double h = steps ? T / static_cast<double>(steps) : 0.0;
  auto rhs = [&s](const Eigen::VectorXd& u) -> Eigen::VectorXd { return -spray_eta(s, u); };
  SprayTrajectory tr;
  Eigen::VectorXd u = y0;
  const double f0 = s.norm().value(y0);
  auto record = [&](double t) {
    const double f = s.norm().value(u);
    tr.times.push_back(t);
    tr.states.push_back(u);
    tr.speed.push_back(f);
    tr.max_speed_drift = std::max(tr.max_speed_drift, std::abs(f - f0) / f0);
  };
  record(0);
  for (std::size_t n = 0; n < steps; ++n) {
    const Eigen::VectorXd k1 = rhs(u);
    const Eigen::VectorXd k2 = rhs(u + 0.5 * h * k1);
    const Eigen::VectorXd k3 = rhs(u + 0.5 * h * k2);
    const Eigen::VectorXd k4 = rhs(u + h * k3);
    u += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    const double mag = u.norm();
    if (!std::isfinite(mag) || mag > 1e150) throw NumericalError("trajectory overflow");
    if (mag < 1e-150) throw NumericalError("trajectory underflow");
    record(static_cast<double>(n + 1) * h);
  }
  return tr;
}

inline void write_trajectory_csv(std::ostream& os, const SprayTrajectory& tr, const std::vector<std::string>& labels) {
  os << "t";
  for (const auto& l : labels) os << "," << l;
  os << ",F\n";
  os.precision(17);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << tr.times[i];
    for (Eigen::Index k = 0; k < tr.states[i].size(); ++k) os << "," << tr.states[i](k);
    os << "," << tr.speed[i] << "\n";
  }
}

/// m-basis labels: g-labels where the basis vector is a unit vector, else m1, m2, ...
inline std::vector<std::string> complement_labels(const HomogeneousSpace& s) {
  std::vector<std::string> out;
  const auto& labels = s.algebra().labels();
  for (std::size_t j = 0; j < s.dim_m(); ++j) {
    const QVector v = s.complement().vector(j);
    std::size_t nz = 0, at = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) {
        ++nz;
        at = i;
      }
    out.push_back(nz == 1 && v[at] == 1 ? labels[at] : "m" + std::to_string(j + 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sub-spaces

/// The space built on a subalgebra g' = (g' ∩ h) ⊕ (g' ∩ m), with the norm
/// restricted to g' ∩ m. Coordinates are those of g''s own basis.
struct SubspaceSpace {
  Subspace gprime;
  Subspace h_part;  ///< g' ∩ h, ambient g
  Subspace m_part;  ///< g' ∩ m, ambient g
  QMatrix m_embedding;  ///< m-coordinates of the m_part basis (dim_m x k)
};

inline SubspaceSpace decompose_subalgebra(const HomogeneousSpace& s, const Subspace& gprime) {
  const LieAlgebra& g = s.algebra();
  if (gprime.ambient_dim() != g.dim()) throw InputError("subalgebra has wrong ambient dimension");
  if (!is_subalgebra(g, gprime)) throw PreconditionError("subspace is not a subalgebra");
  SubspaceSpace out{gprime, intersect(gprime, s.isotropy()), intersect(gprime, s.complement()), {}};
  if (out.h_part.dim() + out.m_part.dim() != gprime.dim())
    throw PreconditionError("subalgebra is not the sum of its isotropy and complement parts");
  out.m_embedding = QMatrix(s.dim_m(), out.m_part.dim());
  for (std::size_t j = 0; j < out.m_part.dim(); ++j) {
    const QVector c = s.project_m(out.m_part.vector(j));
    for (std::size_t i = 0; i < s.dim_m(); ++i) out.m_embedding(i, j) = c[i];
  }
  return out;
}

/// The homogeneous space (g', g' ∩ h) with the restricted norm.
inline HomogeneousSpace restrict_space(const HomogeneousSpace& s, const Subspace& gprime, SpaceAssemblyOptions opt = {}) {
  const SubspaceSpace d = decompose_subalgebra(s, gprime);
  if (d.m_part.is_zero()) throw PreconditionError("restricted space is a point");
  // g' basis: h part then m part
  const Subspace basis(s.algebra().dim(), QMatrix::hcat(d.h_part.basis(), d.m_part.basis()));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < basis.dim(); ++i) labels.push_back("g" + std::to_string(i + 1));
  LieAlgebra sub = subalgebra_structure(s.algebra(), basis, labels);
  const std::size_t p = d.h_part.dim(), k = d.m_part.dim();
  std::vector<QVector> hv, mv;
  for (std::size_t i = 0; i < p; ++i) hv.push_back(unit_vector(p + k, i));
  for (std::size_t i = 0; i < k; ++i) mv.push_back(unit_vector(p + k, p + i));
  return HomogeneousSpace(std::move(sub), Subspace::span(p + k, hv), Subspace(p + k, QMatrix::from_columns(p + k, mv)),
                          restrict_norm(s.norm(), d.m_embedding), opt);
}

}  // namespace gofinsler
