#pragma once

// JSON views of analysis results. Every check carries "provenance": "exact"
// for rational computations and "float" for sampled double-precision ones.

#include <cstdint>
#include <string>

#include "gofinsler/goanalysis.hpp"
#include "gofinsler/spacefile.hpp"

#ifndef GOFINSLER_VERSION
#define GOFINSLER_VERSION "0.1.0"
#endif

namespace gofinsler {

inline constexpr const char* tool_version = GOFINSLER_VERSION;

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

inline json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json validation_json(const NormValidation& v) {
  json viol = json::array();
  for (const auto& x : v.violations) {
    json e = {{"condition", x.condition}, {"value", x.value}};
    if (x.witness.size()) e["witness"] = vec_json(x.witness);
    viol.push_back(e);
  }
  return {{"ok", v.ok},
          {"provenance", "float"},
          {"samples", v.samples},
          {"min_eigenvalue", v.min_eigenvalue},
          {"max_euler_error", v.max_euler_error},
          {"max_homogeneity_error", v.max_homogeneity_error},
          {"violations", viol}};
}

inline json invariance_json(const InvarianceReport& r) {
  if (r.skipped) return {{"ok", false}, {"skipped", true}, {"note", "not run: the norm failed validation"}};
  json j = {{"ok", r.ok}, {"provenance", "float"}, {"samples", r.samples}, {"max_violation", r.max_violation}};
  if (!r.ok) {
    j["witness"] = vec_json(r.witness);
    j["action_index"] = r.action_index;
  }
  return j;
}

inline json space_json(const HomogeneousSpace& s) {
  return {{"dim_g", s.algebra().dim()},
          {"dim_h", s.dim_h()},
          {"dim_m", s.dim_m()},
          {"isotropy", canonical_basis_json(s.isotropy())},
          {"complement", basis_json(s.complement())},
          {"complement_mode", s.complement_is_killing_orthogonal() ? "auto-killing-orthogonal" : "explicit"},
          {"norm_family", family_name(s.norm().family())}};
}

inline json go_json(const GoReport& r) {
  std::size_t exact = 0;
  for (const auto& s : r.samples) exact += s.exact;
  json j = {{"verdict", r.consistent ? "GO_consistent" : "not_GO"},
            {"provenance", exact == r.samples.size() ? "exact" : exact ? "exact+float" : "float"},
            {"samples_requested", r.sample_count},
            {"directions_checked", r.samples.size()},
            {"exact_directions", exact},
            {"seed", r.seed},
            {"tolerance", r.tolerance},
            {"max_residual", r.max_residual},
            {"worst_index", r.worst}};
  if (!r.samples.empty()) j["worst_u_prime"] = vec_json(r.samples[r.worst].u_prime);
  if (r.witness) j["witness"] = vec_json(*r.witness);
  return j;
}

inline json tg_json(const TotallyGeodesicReport& r) {
  json j = {{"applicable", r.applicable},
            {"totally_geodesic", r.applicable && r.totally_geodesic},
            {"provenance", "float"},
            {"samples", r.samples},
            {"max_residual", r.max_residual}};
  if (!r.reason.empty()) j["note"] = r.reason;
  if (r.witness && !r.totally_geodesic) j["witness"] = vec_json(*r.witness);
  return j;
}

inline json algebra_json(const LieAlgebra& g) {
  json br = json::array();
  for (const auto& e : g.bracket_entries()) br.push_back({e.i, e.j, e.k, format_rational(e.value)});
  return {{"dim", g.dim()}, {"labels", g.labels()}, {"brackets", br}};
}

inline json structure_json(const StructureReport& r) {
  json simple = json::array();
  for (const auto& s : r.levi.simple_ideals) simple.push_back({{"basis", canonical_basis_json(s.ideal)}, {"compact", s.compact}});
  json j = {
      {"provenance", "exact"},
      {"radical", canonical_basis_json(r.levi.radical)},
      {"nilradical", canonical_basis_json(r.levi.nilradical)},
      {"levi", canonical_basis_json(r.levi.levi)},
      {"levi_supplied", r.levi.levi_supplied},
      {"s_c", canonical_basis_json(r.levi.compact_part)},
      {"s_nc", canonical_basis_json(r.levi.noncompact_part)},
      {"s_nc_name", noncompact_part_name(r.levi)},
      {"simple_ideals", simple},
      {"cartan_involution",
       {{"source", theta_source_name(r.theta_source)},
        {"preserves_s_nc", r.theta_checks.preserves_s_nc},
        {"involution", r.theta_checks.involution},
        {"automorphism", r.theta_checks.automorphism},
        {"killing_definite", r.theta_checks.definite}}},
      {"k_nc", canonical_basis_json(r.k_nc)},
      {"k_nc_derived", canonical_basis_json(r.k_nc_derived)},
      {"k_nc_center", canonical_basis_json(r.k_nc_center)},
      {"h_nc", canonical_basis_json(r.h_nc)},
      {"base_pair", {{"g", canonical_basis_json(r.levi.noncompact_part)}, {"k", canonical_basis_json(r.k_nc)}, {"symmetric", r.base_symmetric}}},
      {"fiber_algebra", canonical_basis_json(r.fiber_algebra)},
      {"fiber_identification", "fiber = s_c + center(k_nc) + radical"},
      {"fiber_step_size", r.fiber_step_size ? json(*r.fiber_step_size) : json("infinite")},
      {"snc_commutes_with_radical", r.snc_commutes_with_radical},
      {"isotropy_matches_k_nc", r.isotropy_matches_k_nc},
      {"isotropy_note", r.theta_source == ThetaSource::derived_from_isotropy
                           ? "theta was derived from h_nc, so h_nc = k_nc holds by construction"
                           : "consistency flag; g is not certified to be the full isometry algebra"},
      {"step_bound_ok", r.step_bound_ok},
  };
  json ps = {{"applies", r.product.applies}};
  if (r.product.applies) {
    ps["g1"] = canonical_basis_json(r.product.g1);
    ps["h1"] = canonical_basis_json(r.product.h1);
    ps["g2"] = canonical_basis_json(r.product.g2);
    ps["h2"] = canonical_basis_json(r.product.h2);
  } else {
    ps["blocked_by"] = r.product.reason;
  }
  j["product_split"] = ps;
  if (r.go_consistent) j["go_consistent"] = *r.go_consistent;
  return j;
}

inline json killing_json(const KillingLengthReport& r) {
  return {{"ok", r.ok()},
          {"provenance", "float"},
          {"derivative_max", r.derivative_max},
          {"derivative_ok", r.derivative_ok},
          {"flow_max", r.flow_max},
          {"flow_ok", r.flow_ok}};
}

inline json quotient_json(const QuotientResult& q) {
  json j = {{"provenance", "exact"},
            {"h2", canonical_basis_json(q.h2)},
            {"quotient_algebra", algebra_json(q.quotient.algebra)},
            {"quotient_isotropy", canonical_basis_json(q.isotropy)},
            {"quotient_complement", basis_json(q.complement)},
            {"is_point", q.is_point()}};
  if (q.space) {
    j["quotient_norm_validation"] = validation_json(q.space->norm_validation());
    j["quotient_invariance"] = invariance_json(q.space->invariance());
  }
  return j;
}

}  // namespace gofinsler
