#pragma once

// SpaceFile JSON: parsing with schema paths in every error, and export.
//
//   {"algebra":    {"dim": n, "labels": [...], "brackets": [[i, j, k, "p/q"], ...]},
//    "isotropy":   {"basis": [[...], ...]},
//    "complement": {"mode": "auto-killing-orthogonal"} | {"mode": "explicit", "basis": [...]},
//    "norm":       {"family": "euclidean" | "randers", "A": [[...], ...], "b": [...]},
//    "cartan_involution": {"matrix": [[...], ...]},        (optional)
//    "levi":       {"basis": [...]},                       (optional)
//    "subspaces":  {"name": {"basis": [...], "role": "..."}} (optional)}
//
// Indices are 0-based. Rationals are "p/q" strings or JSON integers.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gofinsler/catalog.hpp"
#include "gofinsler/homspace.hpp"

namespace gofinsler {

using json = nlohmann::json;

struct SpaceDocument {
  std::string name;
  LieAlgebra algebra;
  Subspace isotropy;
  std::optional<Subspace> complement;  // nullopt: Killing-orthogonal
  std::optional<QMatrix> norm_A;
  std::optional<QVector> norm_b;       // set for randers
  std::optional<QMatrix> cartan_involution;
  std::optional<Subspace> levi;
  std::vector<NotableSubspace> subspaces;

  MinkowskiNorm norm() const {
    return norm_b ? MinkowskiNorm::randers(*norm_A, *norm_b) : MinkowskiNorm::euclidean(*norm_A);
  }
  HomogeneousSpace build(SpaceAssemblyOptions opt = {}) const {
    return HomogeneousSpace(algebra, isotropy, complement, norm(), opt);
  }
  const NotableSubspace* find_subspace(const std::string& n) const {
    for (const auto& s : subspaces)
      if (s.name == n) return &s;
    return nullptr;
  }
};

namespace detail {

inline const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError("expected an object", path);
  auto it = j.find(key);
  if (it == j.end()) throw InputError("missing required field", path == "$" ? key : path + "." + key);
  return *it;
}

inline Rational json_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(e.what(), path);
    }
  }
  throw InputError("expected a rational (\"p/q\" string or integer)", path);
}

inline std::size_t json_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw InputError("expected a nonnegative integer", path);
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

inline QVector json_vector(const json& j, std::size_t len, const std::string& path) {
  if (!j.is_array()) throw InputError("expected an array", path);
  if (j.size() != len) throw InputError("expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()), path);
  QVector v(len);
  for (std::size_t i = 0; i < len; ++i) v[i] = json_rational(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

/// Square matrix given as nested rows or as a flat row-major list.
inline QMatrix json_matrix(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array()) throw InputError("expected an array", path);
  QMatrix m(n, n);
  if (j.size() == n * n && (n == 0 || !j[0].is_array())) {
    for (std::size_t i = 0; i < n * n; ++i) m(i / n, i % n) = json_rational(j[i], path + "[" + std::to_string(i) + "]");
    return m;
  }
  if (j.size() != n) throw InputError("expected " + std::to_string(n) + " rows", path);
  for (std::size_t i = 0; i < n; ++i) {
    const QVector row = json_vector(j[i], n, path + "[" + std::to_string(i) + "]");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = row[k];
  }
  return m;
}

/// Basis list of vectors in an n-dimensional space; must be independent.
inline Subspace json_basis(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array()) throw InputError("expected an array of vectors", path);
  std::vector<QVector> vs;
  for (std::size_t i = 0; i < j.size(); ++i) vs.push_back(json_vector(j[i], n, path + "[" + std::to_string(i) + "]"));
  try {
    return Subspace(n, QMatrix::from_columns(n, vs));
  } catch (const InputError& e) {
    throw InputError(e.what(), path);
  }
}

inline json rational_json(const Rational& r) { return format_rational(r); }

inline json vector_json(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(rational_json(x));
  return a;
}

inline json matrix_json(const QMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

}  // namespace detail

/// List of basis vectors of a subspace.
inline json basis_json(const Subspace& s) {
  json a = json::array();
  for (const auto& v : s.vectors()) a.push_back(detail::vector_json(v));
  return a;
}

/// Basis in reduced row echelon form, independent of how the subspace was built.
inline json canonical_basis_json(const Subspace& s) {
  const QMatrix b = s.canonical_basis();
  json a = json::array();
  for (std::size_t j = 0; j < b.cols(); ++j) a.push_back(detail::vector_json(b.col(j)));
  return a;
}

inline json rational_matrix_json(const QMatrix& m) { return detail::matrix_json(m); }

/// Parses and schema-checks a SpaceFile document. Every error names its path.
inline SpaceDocument parse_space(const json& doc) {
  using namespace detail;
  SpaceDocument out;
  if (!doc.is_object()) throw InputError("top level must be an object", "$");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InputError("expected a string", "name");
    out.name = doc["name"].get<std::string>();
  }

  const json& alg = member(doc, "algebra", "$");
  const std::size_t n = json_index(member(alg, "dim", "algebra"), "algebra.dim");
  if (n == 0 || n > 64) throw InputError("dimension must be between 1 and 64", "algebra.dim");
  std::vector<std::string> labels;
  if (alg.contains("labels")) {
    const json& l = alg["labels"];
    if (!l.is_array() || l.size() != n) throw InputError("expected " + std::to_string(n) + " labels", "algebra.labels");
    for (std::size_t i = 0; i < n; ++i) {
      if (!l[i].is_string()) throw InputError("expected a string", "algebra.labels[" + std::to_string(i) + "]");
      labels.push_back(l[i].get<std::string>());
    }
  }
  const json& br = member(alg, "brackets", "algebra");
  if (!br.is_array()) throw InputError("expected an array", "algebra.brackets");
  std::vector<BracketEntry> entries;
  for (std::size_t t = 0; t < br.size(); ++t) {
    const std::string p = "algebra.brackets[" + std::to_string(t) + "]";
    if (!br[t].is_array() || br[t].size() != 4) throw InputError("expected [i, j, k, value]", p);
    BracketEntry e{json_index(br[t][0], p + "[0]"), json_index(br[t][1], p + "[1]"), json_index(br[t][2], p + "[2]"),
                   json_rational(br[t][3], p + "[3]")};
    for (std::size_t q = 0; q < 3; ++q) {
      const std::size_t idx = q == 0 ? e.i : q == 1 ? e.j : e.k;
      if (idx >= n) throw InputError("index out of range", p + "[" + std::to_string(q) + "]");
    }
    entries.push_back(e);
  }
  try {
    out.algebra = LieAlgebra::from_brackets(n, labels, entries);
  } catch (const InputError& e) {
    throw InputError(e.what(), "algebra.brackets");
  }

  if (doc.contains("isotropy"))
    out.isotropy = json_basis(member(doc["isotropy"], "basis", "isotropy"), n, "isotropy.basis");
  else
    out.isotropy = Subspace::zero(n);
  if (!is_subalgebra(out.algebra, out.isotropy)) throw InputError("isotropy is not a subalgebra", "isotropy.basis");

  std::size_t mdim = n - out.isotropy.dim();
  if (doc.contains("complement")) {
    const json& c = doc["complement"];
    const json& mode = member(c, "mode", "complement");
    if (!mode.is_string()) throw InputError("expected a string", "complement.mode");
    const std::string ms = mode.get<std::string>();
    if (ms == "explicit") {
      out.complement = json_basis(member(c, "basis", "complement"), n, "complement.basis");
      mdim = out.complement->dim();
    } else if (ms != "auto-killing-orthogonal") {
      throw InputError("mode must be \"auto-killing-orthogonal\" or \"explicit\"", "complement.mode");
    }
  }

  const json& nm = member(doc, "norm", "$");
  const json& fam = member(nm, "family", "norm");
  if (!fam.is_string()) throw InputError("expected a string", "norm.family");
  const std::string family = fam.get<std::string>();
  if (family != "euclidean" && family != "randers")
    throw InputError("family must be \"euclidean\" or \"randers\"", "norm.family");
  out.norm_A = json_matrix(member(nm, "A", "norm"), mdim, "norm.A");
  if (!(*out.norm_A == out.norm_A->transpose())) throw InputError("A must be symmetric", "norm.A");
  if (family == "randers") out.norm_b = json_vector(member(nm, "b", "norm"), mdim, "norm.b");
  else if (nm.contains("b")) throw InputError("euclidean norms take no covector", "norm.b");

  if (doc.contains("cartan_involution"))
    out.cartan_involution = json_matrix(member(doc["cartan_involution"], "matrix", "cartan_involution"), n,
                                        "cartan_involution.matrix");
  if (doc.contains("levi")) out.levi = json_basis(member(doc["levi"], "basis", "levi"), n, "levi.basis");
  if (doc.contains("subspaces")) {
    const json& ss = doc["subspaces"];
    if (!ss.is_object()) throw InputError("expected an object", "subspaces");
    for (auto it = ss.begin(); it != ss.end(); ++it) {
      const std::string p = "subspaces." + it.key();
      SubspaceRole role = SubspaceRole::other;
      if (it->contains("role")) {
        if (!(*it)["role"].is_string()) throw InputError("expected a string", p + ".role");
        try {
          role = parse_role((*it)["role"].get<std::string>());
        } catch (const InputError& e) {
          throw InputError(e.what(), p + ".role");
        }
      }
      out.subspaces.push_back({it.key(), role, json_basis(member(*it, "basis", p), n, p + ".basis")});
    }
  }
  return out;
}

inline SpaceDocument parse_space_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what(), "$");
  }
  return parse_space(doc);
}

inline SpaceDocument read_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_space_text(ss.str());
}

inline json export_space(const SpaceDocument& d) {
  using namespace detail;
  json doc;
  if (!d.name.empty()) doc["name"] = d.name;
  json br = json::array();
  for (const auto& e : d.algebra.bracket_entries()) br.push_back({e.i, e.j, e.k, rational_json(e.value)});
  doc["algebra"] = {{"dim", d.algebra.dim()}, {"labels", d.algebra.labels()}, {"brackets", br}};
  doc["isotropy"] = {{"basis", basis_json(d.isotropy)}};
  if (d.complement)
    doc["complement"] = {{"mode", "explicit"}, {"basis", basis_json(*d.complement)}};
  else
    doc["complement"] = {{"mode", "auto-killing-orthogonal"}};
  doc["norm"] = {{"family", d.norm_b ? "randers" : "euclidean"}, {"A", matrix_json(*d.norm_A)}};
  if (d.norm_b) doc["norm"]["b"] = vector_json(*d.norm_b);
  if (d.cartan_involution) doc["cartan_involution"] = {{"matrix", matrix_json(*d.cartan_involution)}};
  if (d.levi) doc["levi"] = {{"basis", basis_json(*d.levi)}};
  if (!d.subspaces.empty()) {
    json ss = json::object();
    for (const auto& s : d.subspaces) ss[s.name] = {{"role", role_name(s.role)}, {"basis", basis_json(s.subspace)}};
    doc["subspaces"] = ss;
  }
  return doc;
}

/// SpaceFile view of a catalog entry (its norm must be euclidean or randers).
inline SpaceDocument document_from_example(const ExampleDescriptor& e) {
  const HomogeneousSpace& s = e.space;
  if (!s.norm().exact_A()) throw InputError("example norm has no exact representation");
  SpaceDocument d;
  d.name = e.name;
  d.algebra = s.algebra();
  d.isotropy = s.isotropy();
  d.complement = s.complement();
  d.norm_A = *s.norm().exact_A();
  if (s.norm().family() == NormFamily::randers) d.norm_b = *s.norm().exact_b();
  d.cartan_involution = e.cartan_involution;
  d.levi = e.levi;
  d.subspaces = e.subspaces;
  return d;
}

}  // namespace gofinsler
