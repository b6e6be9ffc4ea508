#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gofinsler/catalog.hpp"
#include "gofinsler/homspace.hpp"

using namespace gofinsler;
namespace alg = gofinsler::algebras;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Eigen::VectorXd gaussian(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = d(rng);
  return v;
}

const std::vector<std::string>& go_fixtures() {
  static const std::vector<std::string> names = {"flat_n",      "flat_n_randers", "heis3",  "heis3_randers",
                                                 "hyperbolic2", "hyperbolic3",    "gordon", "product_h3timesheis"};
  return names;
}

/// heis3 closed-form body trajectory from y0 = (1, 0, w).
Eigen::VectorXd heis_exact(double w, double t) { return vec({std::cos(w * t), std::sin(w * t), w}); }

double heis_error(double dt, double T) {
  const auto d = build_example("heis3");
  const auto tr = integrate_spray(d.space, vec({1, 0, 2}), T, dt);
  return (tr.states.back() - heis_exact(2, T)).norm();
}

}  // namespace

TEST(ReductiveComplement, KillingOrthogonalExamples) {
  // sl(2,R) / so(2): m = span{H, E + F}
  const LieAlgebra g = alg::sl2();
  const Subspace h = Subspace::span(3, {QVector{0, 1, -1}});
  const Subspace m = reductive_complement(g, h);
  EXPECT_EQ(m, Subspace::span(3, {QVector{1, 0, 0}, QVector{0, 1, 1}}));
  // so(3,1) / so(3): the boosts
  const Subspace m31 = reductive_complement(alg::so31(), Subspace(6, QMatrix::from_columns(6, {unit_vector(6, 0), unit_vector(6, 1), unit_vector(6, 2)})));
  EXPECT_EQ(m31, Subspace(6, QMatrix::from_columns(6, {unit_vector(6, 3), unit_vector(6, 4), unit_vector(6, 5)})));
  // gordon: complement of the diagonal isotropy
  const LieAlgebra gg = direct_sum(alg::sl2(), alg::abelian(1));
  const Subspace hg = Subspace::span(4, {QVector{0, 1, -1, 1}});
  EXPECT_EQ(reductive_complement(gg, hg),
            Subspace::span(4, {QVector{1, 0, 0, 0}, QVector{0, 1, 1, 0}, QVector{0, 0, 0, 1}}));
  // trivial isotropy
  EXPECT_EQ(reductive_complement(alg::heis3(), Subspace::zero(3)), Subspace::whole(3));
}

TEST(ReductiveComplement, DegenerateKillingFormNeedsExplicitComplement) {
  // the center of heis3 is Killing-isotropic
  EXPECT_THROW(reductive_complement(alg::heis3(), Subspace::span(3, {QVector{0, 0, 1}})), PreconditionError);
}

TEST(HomogeneousSpace, ProjectionOnGordon) {
  const auto d = build_example("gordon");
  const HomogeneousSpace& s = d.space;
  // Z lies in m
  auto [hz, mz] = s.split(unit_vector(4, 3));
  EXPECT_EQ(hz, (QVector{0}));
  EXPECT_EQ(mz, (QVector{0, 0, 1}));
  // E - F = (E - F + Z) - Z
  auto [h1, m1] = s.split(QVector{0, 1, -1, 0});
  EXPECT_EQ(h1, (QVector{1}));
  EXPECT_EQ(m1, (QVector{0, 0, -1}));
  // E = ½(E + F) + ½(E - F)
  EXPECT_EQ(s.project_m(unit_vector(4, 1)), (QVector{0, Rational(1, 2), Rational(-1, 2)}));
  EXPECT_EQ(s.project_m_vector(unit_vector(4, 1)), (QVector{0, Rational(1, 2), Rational(1, 2), Rational(-1, 2)}));
}

TEST(HomogeneousSpace, ConstructionErrors) {
  const LieAlgebra g = alg::sl2();
  const auto f2 = MinkowskiNorm::euclidean(QMatrix::identity(2));
  const Subspace h = Subspace::span(3, {QVector{0, 1, -1}});
  // norm dimension differs from dim m
  EXPECT_THROW(HomogeneousSpace(g, h, std::nullopt, MinkowskiNorm::euclidean(QMatrix::identity(3))), InputError);
  // span{E, F} is not a subalgebra
  EXPECT_THROW(HomogeneousSpace(g, Subspace::span(3, {QVector{0, 1, 0}, QVector{0, 0, 1}}), std::nullopt,
                                MinkowskiNorm::euclidean(QMatrix::identity(1))),
               PreconditionError);
  // not a complement
  EXPECT_THROW(HomogeneousSpace(g, h, Subspace::span(3, {QVector{1, 0, 0}, QVector{0, 1, -1}}), f2),
               PreconditionError);
  // a complement that is not h-invariant
  EXPECT_THROW(HomogeneousSpace(g, h, Subspace::span(3, {QVector{1, 0, 0}, QVector{0, 1, 0}}), f2),
               PreconditionError);
}

TEST(HomogeneousSpace, NonInvariantNormIsReported) {
  const auto bad = MinkowskiNorm::euclidean(QMatrix::from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 1}}));
  const HomogeneousSpace s(alg::heis3_so2(), Subspace::span(4, {unit_vector(4, 3)}),
                           Subspace(4, QMatrix::from_columns(4, {unit_vector(4, 0), unit_vector(4, 1), unit_vector(4, 2)})),
                           bad);
  EXPECT_TRUE(s.norm_validation().ok);
  EXPECT_FALSE(s.invariance().ok);
  EXPECT_FALSE(s.valid());
  EXPECT_THROW(s.require_valid(), Error);
}

// -- spray -------------------------------------------------------------------

TEST(Spray, HeisenbergClosedForm) {
  const auto d = build_example("heis3");
  std::mt19937 rng(31);
  for (int k = 0; k < 50; ++k) {
    const Eigen::VectorXd y = gaussian(rng, 3);
    const Eigen::VectorXd eta = spray_eta(d.space, y);
    EXPECT_LT((eta - vec({y(1) * y(2), -y(0) * y(2), 0})).norm(), 1e-13 * y.squaredNorm());
  }
}

TEST(Spray, OrthogonalToItsBasePoint) {
  std::mt19937 rng(32);
  for (const auto& name : {"flat_n", "flat_n_randers", "heis3", "heis3_randers", "filiform4", "hyperbolic2",
                           "hyperbolic3", "gordon", "axb", "product_h3timesheis"}) {
    const auto d = build_example(name);
    const auto& f = d.space.norm();
    const auto dirs = sample_directions(d.space.dim_m(), 200, 0, true);
    for (const auto& y : dirs) {
      const NormJet j = f.jet(y);
      const Eigen::VectorXd eta = spray_eta(d.space, y, j);
      EXPECT_LT(std::abs(eta.dot(j.hessian * y)), 1e-12 * j.value * j.value) << name;
    }
  }
}

TEST(Spray, CovariantUnderBasisChange) {
  // same space with m-basis P-transformed and A pulled back
  const auto d = build_example("gordon");
  const QMatrix p = QMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {2, 0, 1}});
  const Subspace m2(4, d.space.complement().basis() * p);
  const HomogeneousSpace s2(d.space.algebra(), d.space.isotropy(), m2,
                            MinkowskiNorm::euclidean(p.transpose() * QMatrix::identity(3) * p));
  ASSERT_TRUE(s2.valid());
  const Eigen::MatrixXd pd = p.to_eigen();
  std::mt19937 rng(33);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd y2 = gaussian(rng, 3);
    const Eigen::VectorXd y = pd * y2;
    EXPECT_LT((pd * spray_eta(s2, y2) - spray_eta(d.space, y)).norm(), 1e-12 * y.squaredNorm());
  }
}

TEST(Spray, Errors) {
  const auto d = build_example("heis3");
  EXPECT_THROW(spray_eta(d.space, Eigen::VectorXd::Zero(3)), PreconditionError);
  EXPECT_THROW(spray_eta(d.space, Eigen::VectorXd::Ones(2)), InputError);
}

// -- geodesic vectors --------------------------------------------------------

TEST(GeodesicVector, HeisenbergRotationCoefficient) {
  const auto d = build_example("heis3");
  std::mt19937 rng(34);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd u = gaussian(rng, 3);
    const GeodesicVector gv = geodesic_vector_solve(d.space, u);
    EXPECT_LT(gv.residual, 1e-13);
    ASSERT_EQ(gv.u_prime.size(), 1);
    EXPECT_NEAR(gv.u_prime(0), u(2), 1e-12 * u.norm());
  }
  const auto ex = geodesic_vector_solve_exact(d.space, QVector{1, 2, 3});
  ASSERT_TRUE(ex);
  EXPECT_EQ(ex->residual, 0);
  EXPECT_EQ(ex->u_prime, (QVector{3}));
}

TEST(GeodesicVector, RandersHeisenbergCoefficient) {
  // u' = (z + beta |u|) D in the normalization where ad D maps X to Y
  const auto d = build_example("heis3_randers");
  const HomogeneousSpace& s = d.space;
  ASSERT_EQ(s.dim_h(), 1u);
  const Eigen::VectorXd x = vec({1, 0, 0});
  const Eigen::VectorXd wx = s.h_action()[0] * x;  // = c Y for the isotropy generator c D
  ASSERT_NEAR(wx(0), 0, 1e-15);
  const double c = wx(1);
  std::mt19937 rng(35);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd u = gaussian(rng, 3);
    const GeodesicVector gv = geodesic_vector_solve(s, u);
    EXPECT_LT(gv.residual, 1e-12);
    EXPECT_NEAR(c * gv.u_prime(0), u(2) + 0.3 * u.norm(), 1e-10 * u.norm());
  }
}

TEST(GeodesicVector, FiliformResidualFloor) {
  const auto d = build_example("filiform4");
  const GeodesicVector gv = geodesic_vector_solve(d.space, vec({1, 1, 1, 0}));
  EXPECT_GT(gv.residual, 0.1);
  const auto ex = geodesic_vector_solve_exact(d.space, QVector{1, 1, 1, 0});
  ASSERT_TRUE(ex);
  EXPECT_EQ(ex->residual, Rational(1, 3));
}

TEST(GeodesicVector, AxbResidualClosedForm) {
  // max(|ab|, b^2) / (a^2 + b^2) at u = a e1 + b e2
  const auto d = build_example("axb");
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {3, -1}, {0, 1}}) {
    const GeodesicVector gv = geodesic_vector_solve(d.space, vec({a, b}));
    EXPECT_NEAR(gv.residual, std::max(std::abs(a * b), b * b) / (a * a + b * b), 1e-14);
  }
}

TEST(GeodesicVector, ScalingBehaviour) {
  std::mt19937 rng(36);
  for (const auto& name : {"gordon", "heis3_randers", "filiform4", "product_h3timesheis"}) {
    const auto d = build_example(name);
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd u = gaussian(rng, d.space.dim_m());
      const GeodesicVector a = geodesic_vector_solve(d.space, u);
      for (double lambda : {0.1, 7.0}) {
        const GeodesicVector b = geodesic_vector_solve(d.space, lambda * u);
        EXPECT_NEAR(b.residual, a.residual, 1e-12 * std::max(1.0, a.residual)) << name;
        EXPECT_LT((b.u_prime - lambda * a.u_prime).norm(), 1e-10 * lambda * std::max(1.0, a.u_prime.norm())) << name;
      }
    }
  }
}

TEST(GeodesicVector, AgreesWithOrbitTangency) {
  // with u' solving the geodesic equation, η(u) = -[u', u]_m; and the
  // orbit-tangency residual vanishes exactly when the least-squares one does
  std::mt19937 rng(37);
  for (const auto& name : go_fixtures()) {
    const auto d = build_example(name);
    const HomogeneousSpace& s = d.space;
    for (int k = 0; k < 20; ++k) {
      const Eigen::VectorXd u = gaussian(rng, s.dim_m());
      const GeodesicVector gv = geodesic_vector_solve(s, u);
      EXPECT_LT(orbit_tangency_residual(s, u), 1e-9) << name;
      Eigen::VectorXd wu = Eigen::VectorXd::Zero(u.size());
      for (std::size_t a = 0; a < s.dim_h(); ++a) wu += gv.u_prime(static_cast<Eigen::Index>(a)) * (s.h_action()[a] * u);
      EXPECT_LT((spray_eta(s, u) + wu).norm(), 1e-9 * u.squaredNorm()) << name;
    }
  }
  for (const auto& name : {"filiform4", "axb"}) {
    const auto d = build_example(name);
    const Eigen::VectorXd u = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d.space.dim_m()));
    EXPECT_GT(orbit_tangency_residual(d.space, u), 1e-3) << name;
  }
}

// -- ODE ---------------------------------------------------------------------

TEST(Integrate, HeisenbergRotationClosedForm) {
  const auto d = build_example("heis3");
  const auto tr = integrate_spray(d.space, vec({1, 0, 2}), 1.0, 1e-3);
  ASSERT_EQ(tr.times.size(), 1001u);
  for (std::size_t i = 0; i < tr.times.size(); i += 100)
    EXPECT_LT((tr.states[i] - heis_exact(2, tr.times[i])).norm(), 1e-6);
  EXPECT_LT(tr.max_speed_drift, 1e-6);
}

TEST(Integrate, FourthOrderConvergence) {
  const double e1 = heis_error(0.2, 2.0), e2 = heis_error(0.1, 2.0), e3 = heis_error(0.05, 2.0);
  EXPECT_GE(std::log2(e1 / e2), 3.5);
  EXPECT_GE(std::log2(e2 / e3), 3.5);
  // and on a Randers space against a fine reference
  const auto d = build_example("heis3_randers");
  const Eigen::VectorXd y0 = vec({0.6, -0.3, 0.9});
  const Eigen::VectorXd ref = integrate_spray(d.space, y0, 2.0, 0.2 / 64).states.back();
  auto err = [&](double dt) { return (integrate_spray(d.space, y0, 2.0, dt).states.back() - ref).norm(); };
  EXPECT_GE(std::log2(err(0.2) / err(0.1)), 3.5);
  EXPECT_GE(std::log2(err(0.1) / err(0.05)), 3.5);
}

TEST(Integrate, SpeedIsConservedOnEveryFixture) {
  std::mt19937 rng(38);
  for (const auto& name : example_names()) {
    const auto d = build_example(name);
    const Eigen::VectorXd y0 = gaussian(rng, d.space.dim_m());
    const auto tr = integrate_spray(d.space, y0 / d.space.norm().value(y0), 1.0, 1e-3);
    EXPECT_LT(tr.max_speed_drift, 1e-6) << name;
  }
}

TEST(Integrate, CsvAndErrors) {
  const auto d = build_example("heis3");
  const auto tr = integrate_spray(d.space, vec({1, 0, 1}), 0.01, 0.005);
  std::ostringstream os;
  write_trajectory_csv(os, tr, complement_labels(d.space));
  const std::string csv = os.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,X,Y,Z,F");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_THROW(integrate_spray(d.space, vec({1, 0, 1}), 1, 0), InputError);
  EXPECT_THROW(integrate_spray(d.space, vec({0, 0, 0}), 1, 0.1), PreconditionError);
}

// -- sub-spaces --------------------------------------------------------------

TEST(RestrictSpace, ProductFactors) {
  const auto d = build_example("product_h3timesheis");
  const auto f1 = restrict_space(d.space, d.subspace("factor1").subspace);
  EXPECT_EQ(f1.algebra().dim(), 6u);
  EXPECT_EQ(f1.dim_m(), 3u);
  EXPECT_TRUE(f1.valid());
  const auto f2 = restrict_space(d.space, d.subspace("factor2").subspace);
  EXPECT_EQ(f2.algebra().dim(), 4u);
  EXPECT_EQ(f2.dim_h(), 1u);
  EXPECT_TRUE(f2.valid());
  // the second factor carries the heis3 spray
  std::mt19937 rng(39);
  const Eigen::VectorXd y = gaussian(rng, 3);
  EXPECT_LT((spray_eta(f2, y) - vec({y(1) * y(2), -y(0) * y(2), 0})).norm(), 1e-13 * y.squaredNorm());
}

TEST(RestrictSpace, Errors) {
  const auto d = build_example("heis3");
  // span{X, Y} is not a subalgebra
  EXPECT_THROW(restrict_space(d.space, Subspace::span(4, {unit_vector(4, 0), unit_vector(4, 1)})), PreconditionError);
  // span{X + D}: a subalgebra that is not split by h + m
  EXPECT_THROW(decompose_subalgebra(d.space, Subspace::span(4, {QVector{1, 0, 0, 1}})), PreconditionError);
  // the isotropy alone is a point
  EXPECT_THROW(restrict_space(d.space, d.space.isotropy()), PreconditionError);
}
