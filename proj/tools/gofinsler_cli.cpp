// gofinsler command-line tool.
//
// Exit codes: 0 all checks passed / consistent, 1 a mathematical verdict is
// negative, 2 input or validation error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "gofinsler/catalog.hpp"
#include "gofinsler/goanalysis.hpp"
#include "gofinsler/report.hpp"
#include "gofinsler/spacefile.hpp"

using namespace gofinsler;

namespace {

constexpr int kPass = 0, kNegative = 1, kInputError = 2;

struct Options {
  std::string input, example, out, csv, subspace, y0, export_path;
  std::size_t samples = 200;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  double T = 1.0, dt = 1e-3;
};

struct Loaded {
  SpaceDocument doc;
  HomogeneousSpace space;
  std::optional<ExampleDescriptor> example;
  std::string source;
  std::string digest;
};

Loaded load(const Options& o) {
  if (o.input.empty() == o.example.empty()) throw InputError("give exactly one of --input or --example");
  Loaded l;
  if (!o.example.empty()) {
    l.example = build_example(o.example);
    l.doc = document_from_example(*l.example);
    l.source = "example:" + o.example;
  } else {
    l.doc = read_space_file(o.input);
    l.source = "file:" + o.input;
  }
  l.digest = fnv1a_hex(export_space(l.doc).dump());
  l.space = l.doc.build({o.samples, o.seed, o.tol});
  return l;
}

void require_valid_space(const HomogeneousSpace& s) {
  if (!s.valid()) throw InputError("space failed validation (run `validate` for details)");
}

std::vector<const NotableSubspace*> pick(const SpaceDocument& d, const std::string& name, SubspaceRole role) {
  if (!name.empty()) {
    const NotableSubspace* s = d.find_subspace(name);
    if (!s) throw InputError("no subspace named '" + name + "' in the input", "subspaces");
    return {s};
  }
  std::vector<const NotableSubspace*> out;
  for (const auto& s : d.subspaces)
    if (s.role == role) out.push_back(&s);
  return out;
}

Eigen::VectorXd parse_vector(const std::string& text, std::size_t dim) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
  if (text.empty()) return v;
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      if (item.find('/') != std::string::npos) xs.push_back(to_double(parse_rational(item)));
      else {
        std::size_t used = 0;
        xs.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw InputError("cannot parse '" + item + "' as a number", "--y0");
    }
  }
  if (xs.size() != dim) throw InputError("expected " + std::to_string(dim) + " components", "--y0");
  for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
  return v;
}

void write_csv(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw InputError("cannot write CSV file '" + path + "'");
  fn(f);
}

// --- commands --------------------------------------------------------------

int cmd_validate(const Options& o, Loaded& l, json& res) {
  const HomogeneousSpace& s = l.space;
  res["algebra"] = {{"provenance", "exact"}, {"jacobi", true}, {"antisymmetry", true}, {"dim", s.algebra().dim()}};
  res["reductive"] = {{"provenance", "exact"}, {"direct_sum", true}, {"h_subalgebra", true}, {"h_m_in_m", true}};
  res["space"] = space_json(s);
  res["norm"] = validation_json(s.norm_validation());
  res["invariance"] = invariance_json(s.invariance());
  (void)o;
  if (!s.valid()) {
    std::cerr << "error: " << (s.norm_validation().ok ? "norm is not invariant under the isotropy" : "norm failed validation") << "\n";
    return kInputError;
  }
  return kPass;
}

int cmd_go_check(const Options& o, Loaded& l, json& res) {
  require_valid_space(l.space);
  const GoReport r = go_check(l.space, o.samples, o.tol, o.seed);
  res["go_check"] = go_json(r);
  write_csv(o.csv, [&](std::ostream& os) {
    os << "sample_index,residual,F(u)\n";
    os.precision(17);
    for (std::size_t i = 0; i < r.samples.size(); ++i)
      os << i << "," << r.samples[i].residual << "," << l.space.norm().value(r.samples[i].u) << "\n";
  });
  return r.consistent ? kPass : kNegative;
}

int cmd_decompose(const Options& o, Loaded& l, json& res) {
  require_valid_space(l.space);
  const GoReport go = go_check(l.space, o.samples, o.tol, o.seed);
  const StructureReport st = structure_pipeline(l.space, l.doc.cartan_involution, l.doc.levi, go.consistent);
  res["go_check"] = go_json(go);
  res["structure"] = structure_json(st);
  const TotallyGeodesicReport fiber = totally_geodesic_check(l.space, st.fiber_algebra, 100, o.tol, o.seed);
  res["fiber_totally_geodesic"] = tg_json(fiber);
  bool ok = true;
  if (go.consistent)
    ok = st.snc_commutes_with_radical && st.step_bound_ok && st.base_symmetric && fiber.applicable && fiber.totally_geodesic;
  res["consequences_ok"] = ok;
  return ok ? kPass : kNegative;
}

int cmd_totally_geodesic(const Options& o, Loaded& l, json& res) {
  require_valid_space(l.space);
  auto targets = pick(l.doc, o.subspace, SubspaceRole::totally_geodesic);
  json list = json::object();
  bool all = true;
  if (targets.empty()) {
    // default target: the fiber algebra of the structure decomposition
    const StructureReport st = structure_pipeline(l.space, l.doc.cartan_involution, l.doc.levi);
    const auto r = totally_geodesic_check(l.space, st.fiber_algebra, o.samples, o.tol, o.seed);
    list["fiber_algebra"] = tg_json(r);
    list["fiber_algebra"]["basis"] = canonical_basis_json(st.fiber_algebra);
    all = r.applicable && r.totally_geodesic;
  }
  for (const auto* t : targets) {
    const auto r = totally_geodesic_check(l.space, t->subspace, o.samples, o.tol, o.seed);
    list[t->name] = tg_json(r);
    list[t->name]["basis"] = basis_json(t->subspace);
    all = all && r.applicable && r.totally_geodesic;
  }
  res["totally_geodesic"] = list;
  return all ? kPass : kNegative;
}

int cmd_quotient(const Options& o, Loaded& l, json& res) {
  require_valid_space(l.space);
  auto targets = pick(l.doc, o.subspace, SubspaceRole::quotient_ideal);
  if (targets.empty()) throw InputError("no ideal given: use --subspace NAME or a subspace with role quotient_ideal", "subspaces");
  const NotableSubspace* t = targets.front();
  QuotientResult q;
  try {
    q = quotient_by_normal(l.space, t->subspace, {o.samples, o.seed, o.tol});
  } catch (const PreconditionError& e) {
    throw InputError(e.what(), "subspaces." + t->name);
  }
  res["ideal"] = {{"name", t->name}, {"basis", basis_json(t->subspace)}};
  res["quotient"] = quotient_json(q);
  bool ok = true;
  if (q.space) {
    if (!q.space->valid()) {
      res["quotient_go_check"] = nullptr;
      return kNegative;
    }
    const GoReport g = go_check(*q.space, o.samples, o.tol, o.seed);
    res["quotient_go_check"] = go_json(g);
    ok = g.consistent;
  }
  return ok ? kPass : kNegative;
}

int cmd_integrate(const Options& o, Loaded& l, json& res) {
  require_valid_space(l.space);
  const Eigen::VectorXd y0 = parse_vector(o.y0, l.space.dim_m());
  const SprayTrajectory tr = integrate_spray(l.space, y0, o.T, o.dt);
  constexpr double drift_tol = 1e-6;
  res["integrate"] = {{"provenance", "float"},
                      {"method", "rk4"},
                      {"T", o.T},
                      {"dt", o.dt},
                      {"steps", tr.times.size() - 1},
                      {"y0", vec_json(y0)},
                      {"final_state", vec_json(tr.states.back())},
                      {"initial_speed", tr.speed.front()},
                      {"max_speed_drift", tr.max_speed_drift},
                      {"drift_tolerance", drift_tol}};
  write_csv(o.csv, [&](std::ostream& os) { write_trajectory_csv(os, tr, complement_labels(l.space)); });
  return tr.max_speed_drift < drift_tol ? kPass : kNegative;
}

int cmd_catalog(const Options& o, json& res, std::string& digest) {
  if (o.example.empty()) {
    if (!o.input.empty()) throw InputError("catalog takes --example, not --input");
    json list = json::array();
    for (const auto& n : example_names()) {
      const ExampleDescriptor d = build_example(n);
      list.push_back({{"name", n}, {"description", d.description}, {"dim_g", d.space.algebra().dim()},
                      {"dim_m", d.space.dim_m()}, {"go_consistent", d.expected.go_consistent}});
    }
    res["examples"] = list;
    digest = fnv1a_hex(list.dump());
    return kPass;
  }
  Options oo = o;
  Loaded l = load(oo);
  digest = l.digest;
  const ExampleDescriptor& e = *l.example;
  if (!o.export_path.empty()) {
    std::ofstream f(o.export_path);
    if (!f) throw InputError("cannot write '" + o.export_path + "'");
    f << export_space(l.doc).dump(2) << "\n";
  }
  require_valid_space(l.space);
  const GoReport go = go_check(l.space, o.samples, o.tol, o.seed);
  const StructureReport st = structure_pipeline(l.space, l.doc.cartan_involution, l.doc.levi, go.consistent);
  const Expectations& x = e.expected;
  json cmp = json::object();
  bool all = true;
  auto check = [&](const std::string& key, const json& expected, const json& actual) {
    const bool m = expected == actual;
    cmp[key] = {{"expected", expected}, {"actual", actual}, {"match", m}};
    if (auto it = e.provenance.find(key); it != e.provenance.end()) cmp[key]["provenance"] = it->second;
    all = all && m;
  };
  check("go_consistent", x.go_consistent, go.consistent);
  check("step_size", x.step_size, st.fiber_step_size ? json(*st.fiber_step_size) : json("infinite"));
  check("radical_dim", x.radical_dim, st.levi.radical.dim());
  check("s_nc_name", x.s_nc_name, noncompact_part_name(st.levi));
  check("s_nc_dim", x.s_nc_dim, st.levi.noncompact_part.dim());
  check("k_nc_dim", x.k_nc_dim, st.k_nc.dim());
  check("k_nc_center_dim", x.k_nc_center_dim, st.k_nc_center.dim());
  check("product_split_applies", x.product_split_applies, st.product.applies);
  if (auto it = e.provenance.find("structure"); it != e.provenance.end()) res["structure_provenance"] = it->second;
  json subs = json::object();
  for (const auto& s : e.subspaces) {
    json r;
    bool pass = true;
    switch (s.role) {
      case SubspaceRole::totally_geodesic:
      case SubspaceRole::not_totally_geodesic: {
        const auto t = totally_geodesic_check(l.space, s.subspace, 100, o.tol, o.seed);
        r = tg_json(t);
        pass = t.applicable && (t.totally_geodesic == (s.role == SubspaceRole::totally_geodesic));
        break;
      }
      case SubspaceRole::abelian_ideal: {
        const auto k = constant_length_killing_check(l.space, s.subspace, 100, 1e-8, std::nullopt, o.seed);
        r = killing_json(k);
        pass = k.ok();
        break;
      }
      case SubspaceRole::quotient_ideal: {
        const auto q = quotient_by_normal(l.space, s.subspace, {o.samples, o.seed, o.tol});
        r = quotient_json(q);
        if (q.space) {
          const auto g = go_check(*q.space, o.samples, o.tol, o.seed);
          r["go_check"] = go_json(g);
          pass = !go.consistent || g.consistent;
        }
        break;
      }
      case SubspaceRole::fixed_point: {
        const auto f = fixed_point_reduction(l.space, s.subspace, {o.samples, o.seed, o.tol});
        const auto g = go_check(f, o.samples, o.tol, o.seed);
        r = {{"space", space_json(f)}, {"go_check", go_json(g)}};
        pass = !go.consistent || g.consistent;
        break;
      }
      case SubspaceRole::other:
        continue;
    }
    r["role"] = role_name(s.role);
    r["expectation_met"] = pass;
    subs[s.name] = r;
    all = all && pass;
  }
  res["example"] = e.name;
  res["description"] = e.description;
  res["expectations"] = cmp;
  res["subspaces"] = subs;
  res["go_check"] = go_json(go);
  res["structure"] = structure_json(st);
  res["all_expectations_met"] = all;
  return all ? kPass : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesic-orbit analysis of homogeneous Finsler spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version));
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check the algebra, the reductive decomposition, the norm and its invariance"},
      {"go-check", "sampled geodesic-orbit test"},
      {"decompose", "Levi / Cartan structure decomposition"},
      {"totally-geodesic", "totally geodesic test for named subalgebras"},
      {"quotient", "quotient by a normal subalgebra"},
      {"integrate", "integrate the body geodesic equation"},
      {"catalog", "list built-in examples or check one against its expectations"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--input", o.input, "SpaceFile JSON");
    s->add_option("--example", o.example, "built-in example name");
    s->add_option("--samples", o.samples, "quasi-random samples")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--tol", o.tol, "tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
    s->add_option("--out", o.out, "write the JSON report here (default: stdout)");
    s->add_option("--csv", o.csv, "write residuals or the trajectory as CSV");
    if (name == "totally-geodesic" || name == "quotient")
      s->add_option("--subspace", o.subspace, "name of a subspace in the input");
    if (name == "integrate") {
      s->add_option("--y0", o.y0, "initial vector, comma separated (default all ones)");
      s->add_option("--T", o.T, "duration")->capture_default_str();
      s->add_option("--dt", o.dt, "time step")->capture_default_str();
    }
    if (name == "catalog") s->add_option("--export", o.export_path, "write the example as a SpaceFile");
    subs[name] = s;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  std::string command;
  for (const auto& [name, s] : subs)
    if (s->parsed()) command = name;

  const auto start = std::chrono::steady_clock::now();
  json report = {{"command", command}, {"tool_version", tool_version}, {"seed", o.seed}, {"samples", o.samples}, {"tol", o.tol}};
  json res = json::object();
  int code = kPass;
  try {
    std::string digest;
    if (command == "catalog") {
      code = cmd_catalog(o, res, digest);
    } else {
      Loaded l = load(o);
      digest = l.digest;
      report["input"] = l.source;
      if (command == "validate") code = cmd_validate(o, l, res);
      else if (command == "go-check") code = cmd_go_check(o, l, res);
      else if (command == "decompose") code = cmd_decompose(o, l, res);
      else if (command == "totally-geodesic") code = cmd_totally_geodesic(o, l, res);
      else if (command == "quotient") code = cmd_quotient(o, l, res);
      else if (command == "integrate") code = cmd_integrate(o, l, res);
    }
    report["input_digest"] = digest;
  } catch (const InputError& e) {
    code = kInputError;
    report["error"] = {{"message", e.what()}, {"path", e.path()}};
  } catch (const PreconditionError& e) {
    code = kInputError;
    report["error"] = {{"message", e.what()}, {"path", ""}};
  } catch (const std::exception& e) {
    code = kInputError;
    report["error"] = {{"message", std::string("internal failure: ") + e.what()}, {"path", ""}};
  }
  report["results"] = res;
  report["exit_code"] = code;
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (report.contains("error")) std::cerr << "error: " << report["error"]["message"].get<std::string>() << "\n";
  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "error: cannot write '" << o.out << "'\n";
      return kInputError;
    }
    f << text;
  }
  return code;
}
