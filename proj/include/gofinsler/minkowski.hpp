#pragma once

// Minkowski norms: euclidean sqrt(y^T A y), Randers sqrt(y^T A y) + b.y, and
// user-supplied norms. The jet of a norm at y is F(y), the gradient of ½F²
// and the fundamental tensor g(y) = Hessian of ½F².

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gofinsler/error.hpp"
#include "gofinsler/qmatrix.hpp"
#include "gofinsler/sampling.hpp"

namespace gofinsler {

struct NormJet {
  double value = 0;
  Eigen::VectorXd gradient;  // of ½F²
  Eigen::MatrixXd hessian;   // g(y)
};

enum class NormFamily { euclidean, randers, custom };

inline const char* family_name(NormFamily f) {
  switch (f) {
    case NormFamily::euclidean: return "euclidean";
    case NormFamily::randers: return "randers";
    case NormFamily::custom: return "custom";
  }
  return "?";
}

class MinkowskiNorm {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using JetFn = std::function<NormJet(const Eigen::VectorXd&)>;

  MinkowskiNorm() = default;

  static MinkowskiNorm euclidean(const QMatrix& a) {
    MinkowskiNorm n = quadratic(a);
    n.family_ = NormFamily::euclidean;
    return n;
  }
  static MinkowskiNorm randers(const QMatrix& a, const QVector& b) {
    MinkowskiNorm n = quadratic(a);
    if (b.size() != a.rows()) throw InputError("randers covector has wrong length");
    n.family_ = NormFamily::randers;
    n.exact_b_ = b;
    n.b_ = to_eigen(b);
    return n;
  }
  /// Value-only norms get finite-difference derivatives; `jet` (if given) must
  /// return value, gradient of ½F² and Hessian of ½F².
  static MinkowskiNorm custom(std::size_t dim, ValueFn value, std::optional<JetFn> jet = std::nullopt,
                              std::string label = "custom") {
    MinkowskiNorm n;
    n.family_ = NormFamily::custom;
    n.dim_ = dim;
    n.value_fn_ = std::move(value);
    if (jet) n.jet_fn_ = std::move(*jet);
    n.label_ = std::move(label);
    return n;
  }

  std::size_t dim() const noexcept { return dim_; }
  NormFamily family() const noexcept { return family_; }
  const std::string& label() const noexcept { return label_; }
  bool has_analytic_jet() const noexcept { return family_ != NormFamily::custom || bool(jet_fn_); }
  /// Exact A (euclidean and randers only).
  const std::optional<QMatrix>& exact_A() const noexcept { return exact_A_; }
  const std::optional<QVector>& exact_b() const noexcept { return exact_b_; }
  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }

  double value(const Eigen::VectorXd& y) const {
    check(y);
    switch (family_) {
      case NormFamily::euclidean: return std::sqrt(quad(y));
      case NormFamily::randers: return std::sqrt(quad(y)) + b_.dot(y);
      case NormFamily::custom: return y.isZero(0) ? 0.0 : value_fn_(y);
    }
    return 0;
  }

  NormJet jet(const Eigen::VectorXd& y) const {
    check(y);
    if (y.isZero(0)) throw PreconditionError("norm derivatives requested at y = 0");
    NormJet j;
    switch (family_) {
      case NormFamily::euclidean: {
        const double q = quad(y);
        if (!(q > 0)) throw NumericalError("quadratic form is not positive at y");
        j.value = std::sqrt(q);
        j.gradient = A_ * y;
        j.hessian = A_;
        break;
      }
      case NormFamily::randers: {
        const double q = quad(y);
        if (!(q > 0)) throw NumericalError("quadratic form is not positive at y");
        const double alpha = std::sqrt(q);
        const Eigen::VectorXd ay = A_ * y;
        const Eigen::VectorXd dF = ay / alpha + b_;
        j.value = alpha + b_.dot(y);
        j.gradient = j.value * dF;
        j.hessian = dF * dF.transpose() + j.value * (A_ / alpha - ay * ay.transpose() / (alpha * alpha * alpha));
        break;
      }
      case NormFamily::custom:
        j = jet_fn_ ? jet_fn_(y) : finite_difference_jet(y);
        break;
    }
    j.hessian = 0.5 * (j.hessian + j.hessian.transpose()).eval();
    if (!std::isfinite(j.value) || !j.gradient.allFinite() || !j.hessian.allFinite())
      throw NumericalError("norm jet is not finite");
    return j;
  }

  /// ⟨u, v⟩_y = u^T g(y) v.
  double inner(const Eigen::VectorXd& y, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return u.dot(jet(y).hessian * v);
  }

 private:
  static MinkowskiNorm quadratic(const QMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw InputError("norm matrix A must be square and nonempty");
    if (!(a == a.transpose())) throw InputError("norm matrix A must be symmetric");
    MinkowskiNorm n;
    n.dim_ = a.rows();
    n.exact_A_ = a;
    n.A_ = a.to_eigen();
    n.b_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n.dim_));
    return n;
  }

  double quad(const Eigen::VectorXd& y) const { return y.dot(A_ * y); }

  void check(const Eigen::VectorXd& y) const {
    if (static_cast<std::size_t>(y.size()) != dim_) throw InputError("vector has wrong dimension for norm");
    if (!y.allFinite()) throw InputError("non-finite input vector");
  }

  // Central differences of ½F². Gradient step eps^(1/3), Hessian step
  // eps^(1/4) (second differences of values), both scaled by max(1, |y|).
  NormJet finite_difference_jet(const Eigen::VectorXd& y) const {
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(1.0, y.norm());
    const double h1 = std::cbrt(eps) * scale, h2 = std::pow(eps, 0.25) * scale;
    auto e = [&](const Eigen::VectorXd& x) {
      const double f = value_fn_(x);
      return 0.5 * f * f;
    };
    const auto n = y.size();
    NormJet j;
    j.value = value_fn_(y);
    j.gradient.resize(n);
    j.hessian.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, i);
      j.gradient(i) = (e(y + h1 * ei) - e(y - h1 * ei)) / (2 * h1);
    }
    const double e0 = e(y);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, i) * h2;
      j.hessian(i, i) = (e(y + 2 * ei) - 2 * e0 + e(y - 2 * ei)) / (4 * h2 * h2);
      for (Eigen::Index k = i + 1; k < n; ++k) {
        const Eigen::VectorXd ek = Eigen::VectorXd::Unit(n, k) * h2;
        const double v = (e(y + ei + ek) - e(y + ei - ek) - e(y - ei + ek) + e(y - ei - ek)) / (4 * h2 * h2);
        j.hessian(i, k) = j.hessian(k, i) = v;
      }
    }
    return j;
  }

  NormFamily family_ = NormFamily::euclidean;
  std::size_t dim_ = 0;
  std::optional<QMatrix> exact_A_;
  std::optional<QVector> exact_b_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  ValueFn value_fn_;
  JetFn jet_fn_;
  std::string label_;
};

/// b^T A^{-1} b, exact when A and b are rational.
inline double randers_admissibility(const MinkowskiNorm& f) {
  if (f.family() != NormFamily::randers) return 0;
  if (f.exact_A() && f.exact_b() && is_positive_definite(*f.exact_A()))
    return to_double(dot(*f.exact_b(), inverse(*f.exact_A()) * *f.exact_b()));
  return f.b().dot(f.A().ldlt().solve(f.b()));
}

// ---------------------------------------------------------------------------
// Validation

struct NormViolation {
  std::string condition;
  Eigen::VectorXd witness;  // empty for analytic conditions
  double value = 0;
};

struct NormValidation {
  bool ok = true;
  std::size_t samples = 0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  double max_euler_error = 0;
  double max_homogeneity_error = 0;
  std::vector<NormViolation> violations;
};

namespace detail {

inline void add_violation(NormValidation& r, const std::string& cond, const Eigen::VectorXd& w, double v) {
  r.ok = false;
  for (const auto& x : r.violations)
    if (x.condition == cond) return;  // first witness per condition
  r.violations.push_back({cond, w, v});
}

}  // namespace detail

/// Checks the Minkowski-norm axioms on deterministic quasi-random samples.
inline NormValidation validate(const MinkowskiNorm& f, std::size_t sample_count, std::uint64_t seed = 0,
                               double tol = 1e-9) {
  if (sample_count == 0) throw InputError("validate needs at least one sample");
  NormValidation r;
  if (f.exact_A() && !is_positive_definite(*f.exact_A()))
    detail::add_violation(r, "A is not positive definite", {}, 0);
  if (f.family() == NormFamily::randers) {
    const double adm = f.exact_A() && !is_positive_definite(*f.exact_A()) ? 1.0 : randers_admissibility(f);
    if (!(adm < 1)) detail::add_violation(r, "randers admissibility b^T A^-1 b < 1", {}, adm);
  }
  const auto dirs = sample_directions(f.dim(), sample_count, seed, false);
  r.samples = dirs.size();
  for (const auto& d : dirs) {
    const double fd = f.value(d);
    if (!(fd > 0) || !std::isfinite(fd)) {
      detail::add_violation(r, "positivity", d, fd);
      continue;
    }
    const Eigen::VectorXd y = d / fd;
    for (double lambda : {0.5, 2.0, 10.0}) {
      const double err = std::abs(f.value(lambda * y) - lambda);
      r.max_homogeneity_error = std::max(r.max_homogeneity_error, err / lambda);
      if (!(err <= tol * lambda)) detail::add_violation(r, "positive homogeneity", y, err);
    }
    NormJet j;
    try {
      j = f.jet(y);
    } catch (const Error& e) {
      detail::add_violation(r, std::string("jet evaluation: ") + e.what(), y, 0);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j.hessian, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    r.min_eigenvalue = std::min(r.min_eigenvalue, lo);
    if (!(lo > tol * std::max(1.0, hi))) detail::add_violation(r, "g(y) positive definite", y, lo);
    const double e1 = (j.hessian * y - j.gradient).norm() / std::max(1e-300, j.gradient.norm());
    const double e2 = std::abs(y.dot(j.hessian * y) - j.value * j.value) / (j.value * j.value);
    // finite-difference jets only reach ~1e-7
    const double etol = f.has_analytic_jet() ? tol : 1e-6;
    r.max_euler_error = std::max({r.max_euler_error, e1, e2});
    if (!(e1 <= etol)) detail::add_violation(r, "Euler identity g(y)y = grad(F^2/2)", y, e1);
    if (!(e2 <= etol)) detail::add_violation(r, "Euler identity <y,y>_y = F(y)^2", y, e2);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Restriction to a subspace

/// The norm z -> F(J z) on the column space of J (J has full column rank).
inline MinkowskiNorm restrict_norm(const MinkowskiNorm& f, const QMatrix& j) {
  if (j.rows() != f.dim()) throw InputError("restriction map has wrong number of rows");
  if (f.exact_A()) {
    const QMatrix a = j.transpose() * *f.exact_A() * j;
    if (f.family() == NormFamily::euclidean) return MinkowskiNorm::euclidean(a);
    return MinkowskiNorm::randers(a, j.transpose() * *f.exact_b());
  }
  const Eigen::MatrixXd jd = j.to_eigen();
  auto value = [f, jd](const Eigen::VectorXd& z) { return f.value(jd * z); };
  MinkowskiNorm::JetFn jet = [f, jd](const Eigen::VectorXd& z) {
    NormJet s = f.jet(jd * z);
    NormJet out;
    out.value = s.value;
    out.gradient = jd.transpose() * s.gradient;
    out.hessian = jd.transpose() * s.hessian * jd;
    return out;
  };
  return MinkowskiNorm::custom(j.cols(), value, jet, f.label() + "|restricted");
}

// ---------------------------------------------------------------------------
// Linear submersions and horizontal lifts

class LinearSubmersion {
 public:
  LinearSubmersion(Eigen::MatrixXd l, MinkowskiNorm source) : l_(std::move(l)), source_(std::move(source)) {
    if (static_cast<std::size_t>(l_.cols()) != source_.dim()) throw InputError("submersion source dimension mismatch");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(l_, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (!(sv(i) > 1e-12 * std::max(1.0, top))) throw InputError("submersion map is not surjective");
    const Eigen::Index t = l_.rows(), s = l_.cols();
    null_ = svd.matrixV().rightCols(s - t);
    pinv_ = l_.transpose() * (l_ * l_.transpose()).inverse();
  }

  std::size_t source_dim() const { return static_cast<std::size_t>(l_.cols()); }
  std::size_t target_dim() const { return static_cast<std::size_t>(l_.rows()); }
  const Eigen::MatrixXd& map() const noexcept { return l_; }
  const MinkowskiNorm& source_norm() const noexcept { return source_; }
  /// Orthonormal basis of ker l.
  const Eigen::MatrixXd& fiber_basis() const noexcept { return null_; }
  const Eigen::MatrixXd& right_inverse() const noexcept { return pinv_; }

 private:
  Eigen::MatrixXd l_, null_, pinv_;
  MinkowskiNorm source_;
};

struct LiftResult {
  Eigen::VectorXd v1;
  double value = 0;  // F2(v2) = F1(v1)
  std::size_t iterations = 0;
  double projected_gradient = 0;  // relative to F1(v1)
  bool converged = false;
};

/// Minimizes ½F1² over the fiber l^{-1}(v2) by damped Newton. Works on
/// v2/|v2| and rescales, which is exact by positive homogeneity.
inline LiftResult horizontal_lift(const LinearSubmersion& sub, const Eigen::VectorXd& v2,
                                  std::size_t max_iterations = 100) {
  if (static_cast<std::size_t>(v2.size()) != sub.target_dim()) throw InputError("target vector has wrong dimension");
  if (!v2.allFinite()) throw InputError("non-finite target vector");
  if (v2.isZero(0)) throw PreconditionError("horizontal lift of the zero vector");
  const double scale = v2.norm();
  const MinkowskiNorm& f = sub.source_norm();
  const Eigen::MatrixXd& nb = sub.fiber_basis();
  const Eigen::VectorXd p = sub.right_inverse() * (v2 / scale);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(nb.cols());
  auto energy = [&](const Eigen::VectorXd& zz) {
    const double v = f.value(p + nb * zz);
    return 0.5 * v * v;
  };
  LiftResult r;
  for (r.iterations = 0; r.iterations <= max_iterations; ++r.iterations) {
    const Eigen::VectorXd y = p + nb * z;
    const NormJet j = f.jet(y);
    const Eigen::VectorXd grad = nb.transpose() * j.gradient;
    r.v1 = y;
    r.value = j.value;
    r.projected_gradient = grad.norm() / j.value;
    if (grad.size() == 0 || r.projected_gradient < 1e-13) {
      r.converged = true;
      break;
    }
    if (r.iterations == max_iterations) break;
    const Eigen::MatrixXd hess = nb.transpose() * j.hessian * nb;
    Eigen::VectorXd step = -hess.ldlt().solve(grad);
    if (!step.allFinite() || step.dot(grad) >= 0) step = -grad;
    const double e0 = 0.5 * j.value * j.value, slope = step.dot(grad);
    double t = 1;
    if (-slope < 1e-10 * e0) {
      // the energy decrease is below roundoff here; accept the Newton step
      // if it shrinks the gradient
      const Eigen::VectorXd trial = z + step;
      if (!((nb.transpose() * f.jet(p + nb * trial).gradient).norm() < grad.norm())) t = 0;
    } else {
      while (t > 1e-12 && energy(z + t * step) > e0 + 1e-4 * t * slope) t *= 0.5;
    }
    const Eigen::VectorXd znew = z + t * step;
    if (t <= 1e-12 || (znew - z).norm() <= 1e-16 * y.norm()) {
      // stalled at roundoff; accept if already tight
      r.converged = r.projected_gradient < 1e-9;
      break;
    }
    z = znew;
  }
  r.v1 *= scale;
  r.value *= scale;
  return r;
}

/// The induced norm F2(v2) = min{F1(v) : l v = v2}, with its analytic jet
/// from the lift: grad(½F2²) = λ with grad(½F1²)(v1) = l^T λ, and
/// g2 = (l g1^{-1} l^T)^{-1}.
inline MinkowskiNorm quotient_norm(const LinearSubmersion& sub) {
  auto lift = [sub](const Eigen::VectorXd& v2) {
    LiftResult r = horizontal_lift(sub, v2);
    if (!r.converged)
      throw NumericalError("horizontal lift did not converge (relative projected gradient " +
                           std::to_string(r.projected_gradient) + ")");
    return r;
  };
  auto value = [lift](const Eigen::VectorXd& v2) { return lift(v2).value; };
  MinkowskiNorm::JetFn jet = [sub, lift](const Eigen::VectorXd& v2) {
    const LiftResult r = lift(v2);
    const NormJet j1 = sub.source_norm().jet(r.v1);
    const Eigen::MatrixXd& l = sub.map();
    NormJet out;
    out.value = r.value;
    out.gradient = sub.right_inverse().transpose() * j1.gradient;
    const Eigen::MatrixXd dual = l * j1.hessian.ldlt().solve(l.transpose());
    out.hessian = dual.ldlt().solve(Eigen::MatrixXd::Identity(l.rows(), l.rows()));
    return out;
  };
  return MinkowskiNorm::custom(sub.target_dim(), value, jet, "quotient(" + std::string(family_name(sub.source_norm().family())) + ")");
}

// ---------------------------------------------------------------------------
// Infinitesimal invariance

struct InvarianceReport {
  bool ok = true;
  double max_violation = 0;
  Eigen::VectorXd witness;
  std::size_t action_index = 0;
  std::size_t samples = 0;
  bool skipped = false;  // not run because the norm itself is invalid
};

/// Checks ⟨u, W u⟩_u = 0 (relative to F(u)²) for every W and sampled u.
inline InvarianceReport ad_invariance_check(const MinkowskiNorm& f, const std::vector<Eigen::MatrixXd>& actions,
                                            std::size_t sample_count, std::uint64_t seed = 0, double tol = 1e-9) {
  InvarianceReport r;
  for (const auto& w : actions)
    if (static_cast<std::size_t>(w.rows()) != f.dim() || static_cast<std::size_t>(w.cols()) != f.dim())
      throw InputError("isotropy action has wrong dimension");
  if (actions.empty() || f.dim() == 0) return r;
  const auto dirs = sample_directions(f.dim(), sample_count, seed, true);
  r.samples = dirs.size();
  for (const auto& d : dirs) {
    const Eigen::VectorXd u = d / f.value(d);
    const NormJet j = f.jet(u);
    for (std::size_t k = 0; k < actions.size(); ++k) {
      const double v = std::abs(j.gradient.dot(actions[k] * u)) / (j.value * j.value);
      if (v > r.max_violation) {
        r.max_violation = v;
        r.witness = u;
        r.action_index = k;
      }
    }
  }
  r.ok = r.max_violation <= tol;
  return r;
}

}  // namespace gofinsler
