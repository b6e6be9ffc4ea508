#pragma once

// Built-in example spaces with their expected structure. Ground truths come
// from hand computations listed in each entry's `provenance`.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gofinsler/algebras.hpp"
#include "gofinsler/goanalysis.hpp"
#include "gofinsler/homspace.hpp"

namespace gofinsler {

enum class SubspaceRole { other, totally_geodesic, not_totally_geodesic, quotient_ideal, fixed_point, abelian_ideal };

inline const char* role_name(SubspaceRole r) {
  switch (r) {
    case SubspaceRole::other: return "other";
    case SubspaceRole::totally_geodesic: return "totally_geodesic";
    case SubspaceRole::not_totally_geodesic: return "not_totally_geodesic";
    case SubspaceRole::quotient_ideal: return "quotient_ideal";
    case SubspaceRole::fixed_point: return "fixed_point";
    case SubspaceRole::abelian_ideal: return "abelian_ideal";
  }
  return "?";
}

inline SubspaceRole parse_role(const std::string& s) {
  for (auto r : {SubspaceRole::other, SubspaceRole::totally_geodesic, SubspaceRole::not_totally_geodesic,
                 SubspaceRole::quotient_ideal, SubspaceRole::fixed_point, SubspaceRole::abelian_ideal})
    if (s == role_name(r)) return r;
  throw InputError("unknown subspace role '" + s + "'");
}

struct NotableSubspace {
  std::string name;
  SubspaceRole role;
  Subspace subspace;
};

struct Expectations {
  bool go_consistent = false;
  std::size_t step_size = 0;  // of the nilradical
  std::size_t radical_dim = 0;
  std::string s_nc_name = "0";
  std::size_t s_nc_dim = 0;
  std::size_t k_nc_dim = 0;
  std::size_t k_nc_center_dim = 0;
  bool product_split_applies = true;
};

struct ExampleDescriptor {
  std::string name;
  std::string description;
  HomogeneousSpace space;
  Expectations expected;
  std::map<std::string, std::string> provenance;
  std::vector<NotableSubspace> subspaces;
  std::optional<QMatrix> cartan_involution;
  std::optional<Subspace> levi;

  const NotableSubspace& subspace(const std::string& n) const {
    for (const auto& s : subspaces)
      if (s.name == n) return s;
    throw InputError("example " + name + " has no subspace named " + n);
  }
  std::vector<const NotableSubspace*> with_role(SubspaceRole r) const {
    std::vector<const NotableSubspace*> out;
    for (const auto& s : subspaces)
      if (s.role == r) out.push_back(&s);
    return out;
  }
};

struct ExampleParams {
  std::size_t n = 3;                // flat_n dimension
  std::optional<QVector> randers_b;  // flat_n Randers covector
  Rational beta = Rational(3, 10);   // heis3_randers center coefficient
};

namespace detail {

inline QVector uv(std::size_t n, std::size_t i) { return unit_vector(n, i); }

inline Subspace units(std::size_t n, std::initializer_list<std::size_t> idx) {
  std::vector<QVector> v;
  for (auto i : idx) v.push_back(unit_vector(n, i));
  return Subspace(n, QMatrix::from_columns(n, v));
}

inline Subspace range_units(std::size_t n, std::size_t from, std::size_t to) {
  std::vector<QVector> v;
  for (std::size_t i = from; i < to; ++i) v.push_back(unit_vector(n, i));
  return Subspace(n, QMatrix::from_columns(n, v));
}

inline ExampleDescriptor flat_n(const ExampleParams& p) {
  const std::size_t n = p.n;
  if (n < 1 || n > 8) throw InputError("flat_n: n must be between 1 and 8");
  ExampleDescriptor d;
  d.name = "flat_n";
  const MinkowskiNorm f = p.randers_b ? MinkowskiNorm::randers(QMatrix::identity(n), *p.randers_b)
                                      : MinkowskiNorm::euclidean(QMatrix::identity(n));
  if (p.randers_b) {
    auto ext = nilmanifold_isometry_extension(algebras::abelian(n), f, QMatrix::identity(n));
    d.space = std::move(ext.space);
    d.description = "R^" + std::to_string(n) + " with a Randers norm, isotropy = norm-preserving rotations";
  } else {
    LieAlgebra g = semidirect_with_derivations(algebras::abelian(n), algebras::so_n_basis(n));
    const std::size_t N = g.dim();
    d.space = HomogeneousSpace(g, range_units(N, n, N), range_units(N, 0, n), f);
    d.description = "R^" + std::to_string(n) + " ⋊ so(" + std::to_string(n) + "), euclidean";
    if (n >= 3) d.levi = range_units(N, n, N);
  }
  const std::size_t N = d.space.algebra().dim(), hdim = N - n;
  // so(k) is semisimple for k >= 3
  const std::size_t rot = p.randers_b ? n - 1 : n;
  const bool semisimple_h = rot >= 3 && hdim > 0;
  d.expected = {true, 1, semisimple_h ? n : N, "0", 0, 0, 0, true};
  d.provenance["go_consistent"] = "translations realize every straight line";
  d.provenance["structure"] = "R^n is the nilradical; rotations are compact or abelian";
  if (n >= 1) {
    d.subspaces.push_back({"line", SubspaceRole::totally_geodesic, units(N, {0})});
    d.subspaces.push_back({"translations", SubspaceRole::abelian_ideal, range_units(N, 0, n)});
  }
  if (hdim > 0) d.subspaces.push_back({"rotation", SubspaceRole::fixed_point, units(N, {N - 1})});
  return d;
}

inline ExampleDescriptor heis3(bool randers, const Rational& beta) {
  ExampleDescriptor d;
  const std::size_t N = 4;
  if (randers) {
    d.name = "heis3_randers";
    const MinkowskiNorm f = MinkowskiNorm::randers(QMatrix::identity(3), QVector{0, 0, beta});
    auto ext = nilmanifold_isometry_extension(algebras::heis3(), f, QMatrix::identity(3));
    d.space = std::move(ext.space);
    d.description = "heis3 ⋊ so(2) with the Randers norm |u| + beta z";
    d.provenance["go_consistent"] = "u' = (z + beta |u|) D solves the geodesic equation";
  } else {
    d.name = "heis3";
    d.space = HomogeneousSpace(algebras::heis3_so2(), units(N, {3}), range_units(N, 0, 3),
                               MinkowskiNorm::euclidean(QMatrix::identity(3)));
    d.description = "heis3 ⋊ so(2), euclidean";
    d.provenance["go_consistent"] = "u' = z D solves the geodesic equation";
  }
  d.expected = {true, 2, 4, "0", 0, 0, 0, true};
  d.provenance["structure"] = "solvable; nilradical heis3 of step 2";
  d.subspaces.push_back({"center", SubspaceRole::totally_geodesic, units(N, {2})});
  d.subspaces.push_back({"x_plus_z", SubspaceRole::not_totally_geodesic,
                         Subspace::span(N, {QVector{1, 0, 1, 0}})});
  d.subspaces.push_back({"center_ideal", SubspaceRole::quotient_ideal, units(N, {2})});
  d.subspaces.push_back({"center_abelian", SubspaceRole::abelian_ideal, units(N, {2})});
  d.subspaces.push_back({"rotation", SubspaceRole::fixed_point, units(N, {3})});
  return d;
}

inline ExampleDescriptor filiform4() {
  ExampleDescriptor d;
  d.name = "filiform4";
  d.description = "filiform nilpotent algebra n4 with trivial isotropy";
  d.space = HomogeneousSpace(algebras::filiform4(), Subspace::zero(4), Subspace::whole(4),
                             MinkowskiNorm::euclidean(QMatrix::identity(4)));
  d.expected = {false, 3, 4, "0", 0, 0, 0, true};
  d.provenance["go_consistent"] = "least-squares residual bounded away from zero at e1 + e2 + e3";
  d.provenance["structure"] = "descending central series of length 3";
  return d;
}

inline ExampleDescriptor hyperbolic2() {
  ExampleDescriptor d;
  d.name = "hyperbolic2";
  d.description = "hyperbolic plane sl(2,R)/so(2)";
  const Subspace h = Subspace::span(3, {QVector{0, 1, -1}});
  const Subspace m(3, QMatrix::from_columns(3, {QVector{1, 0, 0}, QVector{0, 1, 1}}));
  d.space = HomogeneousSpace(algebras::sl2(), h, m, MinkowskiNorm::euclidean(QMatrix::identity(2)));
  d.expected = {true, 0, 0, "sl(2,R)", 3, 1, 1, false};
  d.provenance["go_consistent"] = "symmetric pair, u' = 0";
  d.provenance["structure"] = "simple noncompact; k_nc = so(2) is abelian";
  d.subspaces.push_back({"geodesic_H", SubspaceRole::totally_geodesic, Subspace::span(3, {QVector{1, 0, 0}})});
  return d;
}

inline ExampleDescriptor hyperbolic3() {
  ExampleDescriptor d;
  d.name = "hyperbolic3";
  d.description = "hyperbolic 3-space so(3,1)/so(3)";
  d.space = HomogeneousSpace(algebras::so31(), range_units(6, 0, 3), range_units(6, 3, 6),
                             MinkowskiNorm::euclidean(QMatrix::identity(3)));
  d.expected = {true, 0, 0, "so(3,1)", 6, 3, 0, true};
  d.provenance["go_consistent"] = "symmetric pair, u' = 0";
  d.provenance["fixed_point"] = "centralizer of L3 meets m in span{K3}: a geodesic line";
  d.subspaces.push_back({"plane", SubspaceRole::totally_geodesic, units(6, {2, 3, 4})});
  d.subspaces.push_back({"rotation", SubspaceRole::fixed_point, units(6, {2})});
  return d;
}

inline ExampleDescriptor gordon() {
  ExampleDescriptor d;
  d.name = "gordon";
  d.description = "sl(2,R) ⊕ R with diagonal isotropy span{(E - F, 1)}";
  LieAlgebra g = direct_sum(algebras::sl2(), algebras::abelian(1));
  const Subspace h = Subspace::span(4, {QVector{0, 1, -1, 1}});
  const Subspace m(4, QMatrix::from_columns(4, {QVector{1, 0, 0, 0}, QVector{0, 1, 1, 0}, QVector{0, 0, 0, 1}}));
  d.space = HomogeneousSpace(std::move(g), h, m, MinkowskiNorm::euclidean(QMatrix::identity(3)));
  d.expected = {true, 1, 1, "sl(2,R)", 3, 1, 1, false};
  d.cartan_involution = algebras::block_diag(algebras::transpose_involution(algebras::sl2()), QMatrix::identity(1));
  d.levi = range_units(4, 0, 3);
  d.provenance["go_consistent"] = "geodesic vectors exist for every direction";
  d.provenance["structure"] = "Levi factor sl(2,R), radical = center R, k_nc = so(2) abelian";
  d.subspaces.push_back({"center_ideal", SubspaceRole::quotient_ideal, units(4, {3})});
  d.subspaces.push_back({"center_abelian", SubspaceRole::abelian_ideal, units(4, {3})});
  d.subspaces.push_back({"isotropy", SubspaceRole::fixed_point, h});
  return d;
}

inline ExampleDescriptor axb() {
  ExampleDescriptor d;
  d.name = "axb";
  d.description = "hyperbolic plane as the solvable group of x -> ax + b";
  // e1 = H/2, e2 = E inside sl(2,R); the hyperbolic2 metric pulls back to diag(1/4, 1/4)
  QMatrix a = QMatrix::identity(2);
  a = Rational(1, 4) * a;
  d.space = HomogeneousSpace(algebras::axb(), Subspace::zero(2), Subspace::whole(2), MinkowskiNorm::euclidean(a));
  d.expected = {false, 1, 2, "0", 0, 0, 0, true};
  d.provenance["go_consistent"] = "residual max(|ab|, b^2)/(a^2 + b^2) at u = a e1 + b e2";
  d.provenance["structure"] = "solvable; nilradical span{e2}";
  return d;
}

inline ExampleDescriptor product() {
  ExampleDescriptor d;
  d.name = "product_h3timesheis";
  d.description = "so(3,1)/so(3) × (heis3 ⋊ so(2))/so(2)";
  LieAlgebra g = direct_sum(algebras::so31(), algebras::heis3_so2());
  const std::size_t N = g.dim();  // 10
  d.space = HomogeneousSpace(std::move(g), units(N, {0, 1, 2, 9}), units(N, {3, 4, 5, 6, 7, 8}),
                             MinkowskiNorm::euclidean(QMatrix::identity(6)));
  d.expected = {true, 2, 4, "so(3,1)", 6, 3, 0, true};
  d.cartan_involution =
      algebras::block_diag(algebras::transpose_involution(algebras::so31()), QMatrix::identity(4));
  d.levi = range_units(N, 0, 6);
  d.provenance["go_consistent"] = "product of GO factors with the product norm";
  d.provenance["structure"] = "so(3) has trivial center, so the product splits";
  d.subspaces.push_back({"factor1", SubspaceRole::totally_geodesic, range_units(N, 0, 6)});
  d.subspaces.push_back({"factor2", SubspaceRole::totally_geodesic, range_units(N, 6, 10)});
  d.subspaces.push_back({"center_abelian", SubspaceRole::abelian_ideal, units(N, {8})});
  d.subspaces.push_back({"heis_center", SubspaceRole::quotient_ideal, units(N, {8})});
  d.subspaces.push_back({"rotation_D", SubspaceRole::fixed_point, units(N, {9})});
  return d;
}

}  // namespace detail

inline std::vector<std::string> example_names() {
  return {"flat_n", "flat_n_randers", "heis3", "heis3_randers", "filiform4", "hyperbolic2",
          "hyperbolic3", "gordon", "axb", "product_h3timesheis"};
}

inline ExampleDescriptor build_example(const std::string& name, ExampleParams params = {}) {
  if (name == "flat_n") return detail::flat_n(params);
  if (name == "flat_n_randers") {
    if (!params.randers_b) {
      QVector b(params.n);
      b[0] = Rational(3, 10);
      params.randers_b = b;
    }
    auto d = detail::flat_n(params);
    d.name = "flat_n_randers";
    return d;
  }
  if (name == "heis3") return detail::heis3(false, params.beta);
  if (name == "heis3_randers") return detail::heis3(true, params.beta);
  if (name == "filiform4") return detail::filiform4();
  if (name == "hyperbolic2") return detail::hyperbolic2();
  if (name == "hyperbolic3") return detail::hyperbolic3();
  if (name == "gordon") return detail::gordon();
  if (name == "axb") return detail::axb();
  if (name == "product_h3timesheis") return detail::product();
  throw InputError("unknown example '" + name + "'");
}

}  // namespace gofinsler
