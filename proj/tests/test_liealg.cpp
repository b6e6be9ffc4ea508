#include <gtest/gtest.h>

#include <random>

#include "gofinsler/algebras.hpp"
#include "gofinsler/liealg.hpp"

using namespace gofinsler;
namespace alg = gofinsler::algebras;

namespace {

QVector e(std::size_t n, std::size_t i) { return unit_vector(n, i); }

/// Matrix sum of coordinates times realization matrices.
QMatrix realize(const std::vector<QMatrix>& mats, const QVector& x) {
  QMatrix m(mats.front().rows(), mats.front().cols());
  for (std::size_t i = 0; i < x.size(); ++i) m = m + x[i] * mats[i];
  return m;
}

/// Structure constants after the basis change f_a = sum_i P(i, a) e_i.
LieAlgebra change_basis(const LieAlgebra& g, const QMatrix& p) {
  const std::size_t n = g.dim();
  const QMatrix pinv = inverse(p);
  std::vector<Rational> c(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const QVector z = pinv * g.bracket(p.col(a), p.col(b));
      for (std::size_t k = 0; k < n; ++k) c[(a * n + b) * n + k] = z[k];
    }
  return LieAlgebra(n, {}, c);
}

QMatrix random_unimodularish(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-2, 2);
  while (true) {
    QMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p(i, j) = d(rng);
    if (rank(p) == n) return p;
  }
}

/// sl(2,R) ⋉ R^2 (standard representation), basis H, E, F, v1, v2.
LieAlgebra sl2_ltimes_r2() {
  QMatrix h(3, 3), ee(3, 3), f(3, 3), v1(3, 3), v2(3, 3);
  h(0, 0) = 1; h(1, 1) = -1;
  ee(0, 1) = 1;
  f(1, 0) = 1;
  v1(0, 2) = 1;
  v2(1, 2) = 1;
  return LieAlgebra::from_matrices({"H", "E", "F", "v1", "v2"}, {h, ee, f, v1, v2});
}

std::vector<LieAlgebra> test_algebras() {
  return {alg::abelian(3), alg::sl2(), alg::heis3(), alg::filiform4(), alg::axb(), alg::so3(),
          alg::so31(), alg::heis3_so2(), direct_sum(alg::sl2(), alg::abelian(1)),
          direct_sum(alg::so3(), alg::heis3()), sl2_ltimes_r2()};
}

}  // namespace

TEST(LieAlgebra, RejectsBrokenJacobi) {
  // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e1 violates Jacobi.
  EXPECT_THROW(LieAlgebra::from_brackets(3, {}, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 0, 1}}), InputError);
  EXPECT_THROW(LieAlgebra::from_brackets(2, {}, {{0, 1, 1, 1}, {1, 0, 1, 1}}), InputError);
  EXPECT_THROW(LieAlgebra::from_brackets(2, {}, {{0, 2, 1, 1}}), InputError);
}

TEST(LieAlgebra, BracketDimensionMismatch) {
  EXPECT_THROW(alg::heis3().bracket(QVector{1, 0}, QVector{0, 1, 0}), InputError);
}

TEST(LieAlgebra, AbelianBracketVanishes) {
  const auto g = alg::abelian(3);
  EXPECT_TRUE(is_zero(g.bracket(QVector{1, 2, 3}, QVector{-1, 5, 7})));
}

TEST(LieAlgebra, Sl2BracketMatchesMatrixCommutator) {
  const auto g = alg::sl2();
  const std::vector<QMatrix> mats = *g.realization();
  const QVector he = g.bracket(e(3, 0), e(3, 1));
  EXPECT_EQ(he, (QVector{0, 2, 0}));
  // Independent oracle: the commutator of the 2x2 matrices.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const QMatrix comm = mats[i] * mats[j] - mats[j] * mats[i];
      EXPECT_EQ(realize(mats, g.bracket(e(3, i), e(3, j))), comm);
    }
}

TEST(LieAlgebra, Heis3BracketMatchesUpperTriangularCommutators) {
  const auto g = alg::heis3();
  const std::vector<QMatrix> mats = {alg::matrix_unit(3, 0, 1), alg::matrix_unit(3, 1, 2),
                                     alg::matrix_unit(3, 0, 2)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_EQ(realize(mats, g.bracket(e(3, i), e(3, j))), mats[i] * mats[j] - mats[j] * mats[i]);
  EXPECT_EQ(g.bracket(e(3, 0), e(3, 1)), e(3, 2));
  EXPECT_TRUE(is_zero(g.bracket(e(3, 0), e(3, 2))));
}

TEST(LieAlgebra, KillingForms) {
  EXPECT_TRUE(alg::abelian(3).killing_form().is_zero());
  EXPECT_TRUE(alg::heis3().killing_form().is_zero());
  const QMatrix b = alg::sl2().killing_form();
  EXPECT_EQ(b, QMatrix::from_rows({{8, 0, 0}, {0, 0, 4}, {0, 4, 0}}));
}

TEST(LieAlgebra, JacobiAntisymmetryAndAdInvarianceOnAllTestAlgebras) {
  for (const auto& g : test_algebras()) {
    const std::size_t n = g.dim();
    EXPECT_FALSE(g.jacobi_violation());
    const QMatrix b = g.killing_form();
    EXPECT_EQ(b, b.transpose());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(g.bracket(e(n, i), e(n, j)), scale(-1, g.bracket(e(n, j), e(n, i))));
        for (std::size_t k = 0; k < n; ++k) {
          // B([x,y],z) + B(y,[x,z]) = 0
          const Rational lhs = dot(g.bracket(e(n, i), e(n, j)), b * e(n, k)) +
                               dot(e(n, j), b * g.bracket(e(n, i), e(n, k)));
          EXPECT_EQ(lhs, 0);
        }
      }
  }
}

TEST(Series, StepSizes) {
  EXPECT_EQ(step_size(alg::abelian(4), Subspace::whole(4)), 1u);
  EXPECT_EQ(step_size(alg::heis3(), Subspace::whole(3)), 2u);
  EXPECT_EQ(step_size(alg::filiform4(), Subspace::whole(4)), 3u);
  EXPECT_FALSE(step_size(alg::sl2(), Subspace::whole(3)));
  EXPECT_FALSE(step_size(alg::axb(), Subspace::whole(2)));

  const auto chain = series(alg::heis3(), Subspace::whole(3), SeriesKind::descending_central);
  ASSERT_EQ(chain.terms.size(), 3u);
  EXPECT_EQ(chain.terms[1], Subspace::span(3, {e(3, 2)}));
  EXPECT_TRUE(chain.terms[2].is_zero());
  for (std::size_t k = 0; k + 1 < chain.terms.size(); ++k) EXPECT_TRUE(chain.terms[k].contains(chain.terms[k + 1]));
}

TEST(Series, DerivedSeriesOfSolvableAlgebra) {
  const auto g = alg::heis3_so2();
  const auto chain = series(g, Subspace::whole(4), SeriesKind::derived);
  ASSERT_EQ(chain.terms.size(), 4u);  // g ⊃ heis3 ⊃ span{Z} ⊃ 0
  EXPECT_EQ(chain.terms[1].dim(), 3u);
  EXPECT_EQ(chain.terms[2].dim(), 1u);
  EXPECT_TRUE(is_solvable(g, Subspace::whole(4)));
}

TEST(Series, RejectsNonSubalgebra) {
  EXPECT_THROW(series(alg::heis3(), Subspace::span(3, {QVector{1, 0, 0}, QVector{0, 1, 0}}),
                      SeriesKind::derived),
               PreconditionError);
}

TEST(Radical, Examples) {
  EXPECT_TRUE(radical(alg::sl2()).is_zero());
  EXPECT_EQ(radical(alg::axb()), Subspace::whole(2));
  EXPECT_EQ(radical(alg::filiform4()), Subspace::whole(4));
  const auto gordon = direct_sum(alg::sl2(), alg::abelian(1));
  EXPECT_EQ(radical(gordon), Subspace::span(4, {e(4, 3)}));
  const auto g = direct_sum(alg::so3(), alg::heis3());
  EXPECT_EQ(radical(g), Subspace::span(6, {e(6, 3), e(6, 4), e(6, 5)}));
}

TEST(Nilradical, Examples) {
  EXPECT_EQ(nilradical(alg::heis3()), Subspace::whole(3));
  EXPECT_EQ(nilradical(alg::axb()), Subspace::span(2, {e(2, 1)}));
  EXPECT_EQ(nilradical(direct_sum(alg::sl2(), alg::abelian(1))), Subspace::span(4, {e(4, 3)}));
  EXPECT_EQ(nilradical(alg::heis3_so2()), Subspace::span(4, {e(4, 0), e(4, 1), e(4, 2)}));
  EXPECT_TRUE(nilradical(alg::so31()).is_zero());
  // sl2 ⋉ R^2: radical = nilradical = R^2.
  const auto g = sl2_ltimes_r2();
  EXPECT_EQ(nilradical(g), Subspace::span(5, {e(5, 3), e(5, 4)}));
}

TEST(Nilradical, ContainmentsOnAllTestAlgebras) {
  for (const auto& g : test_algebras()) {
    const Subspace r = radical(g), n = nilradical(g);
    EXPECT_TRUE(is_ideal(g, r));
    EXPECT_TRUE(is_ideal(g, n));
    EXPECT_TRUE(r.contains(n));
    EXPECT_TRUE(is_nilpotent(g, n));
    EXPECT_TRUE(n.contains(bracket_span(g, Subspace::whole(g.dim()), r)));
  }
}

TEST(Levi, SemisimpleInput) {
  const auto g = alg::sl2();
  const LeviData d = levi_split(g);
  EXPECT_TRUE(d.radical.is_zero());
  EXPECT_EQ(d.levi, Subspace::whole(3));
  EXPECT_TRUE(d.compact_part.is_zero());
  EXPECT_EQ(d.noncompact_part, Subspace::whole(3));
  ASSERT_EQ(d.simple_ideals.size(), 1u);
  EXPECT_FALSE(d.simple_ideals[0].compact);
}

TEST(Levi, GordonAlgebra) {
  const auto g = direct_sum(alg::sl2(), alg::abelian(1));
  const LeviData d = levi_split(g);
  EXPECT_EQ(d.radical, Subspace::span(4, {e(4, 3)}));
  EXPECT_EQ(d.levi, Subspace::span(4, {e(4, 0), e(4, 1), e(4, 2)}));
}

TEST(Levi, CompactFactorInSo3PlusHeis3) {
  const auto g = direct_sum(alg::so3(), alg::heis3());
  const LeviData d = levi_split(g);
  const Subspace so3 = Subspace::span(6, {e(6, 0), e(6, 1), e(6, 2)});
  const Subspace h3 = Subspace::span(6, {e(6, 3), e(6, 4), e(6, 5)});
  EXPECT_EQ(d.compact_part, so3);
  EXPECT_TRUE(d.noncompact_part.is_zero());
  EXPECT_EQ(d.radical, h3);
  EXPECT_EQ(d.nilradical, h3);
  EXPECT_TRUE(is_negative_definite(restricted_form(g.killing_form(), d.compact_part)));
}

TEST(Levi, SplitsSemisimpleSumIntoSimpleIdeals) {
  // so(3) ⊕ sl(2) ⊕ so(3,1): one compact, two noncompact simple ideals.
  const auto g = direct_sum(direct_sum(alg::so3(), alg::sl2()), alg::so31());
  const LeviData d = levi_split(g);
  EXPECT_EQ(d.simple_ideals.size(), 3u);
  EXPECT_EQ(d.compact_part.dim(), 3u);
  EXPECT_EQ(d.noncompact_part.dim(), 9u);
}

TEST(Levi, MalcevLiftingOnTwistedBasis) {
  // Twist sl2 ⋉ R^2 so that the naive complement of the radical is not a subalgebra.
  const auto base = sl2_ltimes_r2();
  QMatrix p = QMatrix::identity(5);
  p(3, 0) = 1;  // H' = H + v1
  p(4, 1) = 2;  // E' = E + 2 v2
  p(3, 2) = -1; // F' = F - v1
  const auto g = change_basis(base, p);
  const LeviData d = levi_split(g);
  EXPECT_EQ(d.radical.dim(), 2u);
  EXPECT_TRUE(is_subalgebra(g, d.levi));
  EXPECT_TRUE(is_direct_sum(d.radical, d.levi, 5));
  EXPECT_EQ(d.noncompact_part.dim(), 3u);
}

TEST(Levi, VerifyModeReportsBrokenCondition) {
  const auto g = direct_sum(alg::sl2(), alg::abelian(1));
  // Correct Levi subalgebra passes.
  EXPECT_NO_THROW(levi_split(g, Subspace::span(4, {e(4, 0), e(4, 1), e(4, 2)})));
  // span{H, E, Z} meets the radical.
  try {
    levi_split(g, Subspace::span(4, {e(4, 0), e(4, 1), e(4, 3)}));
    FAIL() << "expected failure";
  } catch (const PreconditionError& err) {
    EXPECT_NE(std::string(err.what()).find("direct sum"), std::string::npos);
  }
  try {
    levi_split(g, Subspace::span(4, {e(4, 0), e(4, 1)}));
    FAIL() << "expected failure";
  } catch (const PreconditionError& err) {
    EXPECT_NE(std::string(err.what()).find("direct sum"), std::string::npos);
  }
  // span{H, E + Z, F} is a complement but [H, E + Z] = 2E leaves it.
  try {
    levi_split(g, Subspace::span(4, {QVector{1, 0, 0, 0}, QVector{0, 1, 0, 1}, QVector{0, 0, 1, 0}}));
    FAIL() << "expected failure";
  } catch (const PreconditionError& err) {
    EXPECT_NE(std::string(err.what()).find("subalgebra"), std::string::npos);
  }
}

TEST(LargestIdeal, GordonAlgebra) {
  const auto g = direct_sum(alg::sl2(), alg::abelian(1));
  const QVector diag{0, 1, -1, 1};  // (E - F, 1)
  EXPECT_EQ(largest_ideal_in(g, Subspace::whole(4)), Subspace::whole(4));
  EXPECT_TRUE(largest_ideal_in(g, Subspace::span(4, {diag})).is_zero());
  EXPECT_EQ(largest_ideal_in(g, Subspace::span(4, {diag, e(4, 3)})), Subspace::span(4, {e(4, 3)}));
}

TEST(LargestIdeal, ContainsPlantedIdeals) {
  const auto g = direct_sum(alg::so3(), alg::heis3());
  // W = heis3 center + two random directions of so3 + Y.
  const Subspace planted = Subspace::span(6, {e(6, 5)});
  const Subspace w = Subspace::span(6, {e(6, 5), QVector{1, 1, 0, 0, 0, 0}, e(6, 4)});
  const Subspace i = largest_ideal_in(g, w);
  EXPECT_TRUE(w.contains(i));
  EXPECT_TRUE(is_ideal(g, i));
  EXPECT_TRUE(i.contains(planted));
}

TEST(SkewDerivations, Examples) {
  const auto so3 = skew_derivations(alg::abelian(3), QMatrix::identity(3));
  EXPECT_EQ(so3.size(), 3u);
  EXPECT_TRUE(is_closed_under_commutator(so3));

  const auto dh = skew_derivations(alg::heis3(), QMatrix::identity(3));
  ASSERT_EQ(dh.size(), 1u);
  const QMatrix expected = alg::heis3_rotation();
  // Span equality: dh[0] is a nonzero multiple of the rotation D.
  const Rational factor = dh[0](1, 0);
  ASSERT_NE(factor, 0);
  EXPECT_EQ(dh[0], factor * expected);

  EXPECT_TRUE(skew_derivations(alg::filiform4(), QMatrix::identity(4)).empty());
  EXPECT_THROW(skew_derivations(alg::heis3(), QMatrix::from_rows({{1, 0, 0}, {0, -1, 0}, {0, 0, 1}})),
               PreconditionError);
}

TEST(Centralizers, Examples) {
  EXPECT_EQ(center(alg::heis3()), Subspace::span(3, {e(3, 2)}));
  const QVector k{0, 1, -1};  // E - F
  EXPECT_EQ(centralizer(alg::sl2(), Subspace::span(3, {k})), Subspace::span(3, {k}));
  EXPECT_TRUE(derived(alg::abelian(3), Subspace::whole(3)).is_zero());
  EXPECT_TRUE(center(alg::so31()).is_zero());
}

TEST(Quotient, Heis3ModCenterIsAbelian) {
  const auto q = quotient_algebra(alg::heis3(), Subspace::span(3, {e(3, 2)}));
  EXPECT_EQ(q.algebra.dim(), 2u);
  EXPECT_TRUE(derived(q.algebra, Subspace::whole(2)).is_zero());
  EXPECT_THROW(quotient_algebra(alg::heis3(), Subspace::span(3, {e(3, 0)})), PreconditionError);
}

// Property: structural invariants do not depend on the chosen basis.
TEST(LieAlgebraProperty, InvariantsUnderRandomBasisChange) {
  std::mt19937 rng(2024);
  for (const auto& g : test_algebras()) {
    if (g.dim() > 6) continue;
    for (int trial = 0; trial < 2; ++trial) {
      const QMatrix p = random_unimodularish(rng, g.dim());
      const LieAlgebra gp = change_basis(g, p);
      EXPECT_FALSE(gp.jacobi_violation());
      EXPECT_EQ(gp.killing_form(), p.transpose() * g.killing_form() * p);
      EXPECT_EQ(radical(gp).dim(), radical(g).dim());
      EXPECT_EQ(nilradical(gp).dim(), nilradical(g).dim());
      EXPECT_EQ(center(gp).dim(), center(g).dim());
      EXPECT_EQ(step_size(gp, Subspace::whole(g.dim())), step_size(g, Subspace::whole(g.dim())));
      const LeviData d = levi_split(gp);
      EXPECT_TRUE(is_subalgebra(gp, d.levi));
      EXPECT_TRUE(is_direct_sum(d.radical, d.levi, g.dim()));
    }
  }
}
