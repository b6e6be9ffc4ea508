#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gofinsler/report.hpp"
#include "gofinsler/spacefile.hpp"

using namespace gofinsler;
namespace fs = std::filesystem;

namespace {

const char* kHeis = R"({
  "name": "heis",
  "algebra": {"dim": 4, "labels": ["X", "Y", "Z", "D"],
              "brackets": [[0, 1, 2, "1"], [0, 3, 1, -1], [1, 3, 0, 1]]},
  "isotropy": {"basis": [[0, 0, 0, 1]]},
  "complement": {"mode": "explicit", "basis": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]},
  "norm": {"family": "randers", "A": [1, 0, 0, 0, 1, 0, 0, 0, 1], "b": [0, 0, "1/5"]},
  "subspaces": {"center": {"basis": [[0, 0, 1, 0]], "role": "totally_geodesic"}}
})";

json heis_json() { return json::parse(kHeis); }

std::string input_error_path(const json& doc) {
  try {
    parse_space(doc);
  } catch (const InputError& e) {
    return e.path();
  }
  return "<no error>";
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gofinsler_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(GOFINSLER_CLI) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  json report(const std::string& name) const {
    json j = json::parse(read(name));
    j.erase("wall_time_s");
    return j;
  }

  fs::path dir_;
};

}  // namespace

// -- SpaceFile ---------------------------------------------------------------

TEST(SpaceFile, ParsesAndBuilds) {
  const SpaceDocument d = parse_space(heis_json());
  EXPECT_EQ(d.name, "heis");
  EXPECT_EQ(d.algebra.dim(), 4u);
  EXPECT_EQ(d.algebra.bracket(unit_vector(4, 0), unit_vector(4, 1)), unit_vector(4, 2));
  ASSERT_TRUE(d.norm_b);
  EXPECT_EQ((*d.norm_b)[2], Rational(1, 5));
  const HomogeneousSpace s = d.build();
  EXPECT_TRUE(s.valid());
  EXPECT_TRUE(go_check(s).consistent);
  ASSERT_TRUE(d.find_subspace("center"));
  EXPECT_EQ(d.find_subspace("center")->role, SubspaceRole::totally_geodesic);
  EXPECT_EQ(d.find_subspace("none"), nullptr);
}

TEST(SpaceFile, AutoComplement) {
  // sl(2,R) / so(2) with the complement left to the Killing form
  const json j = json::parse(R"({"algebra": {"dim": 3, "brackets": [[0, 1, 1, 2], [0, 2, 2, -2], [1, 2, 0, 1]]},
                      "isotropy": {"basis": [[0, 1, -1]]},
                      "complement": {"mode": "auto-killing-orthogonal"},
                      "norm": {"family": "euclidean", "A": [[1, 0], [0, 1]]}})");
  const HomogeneousSpace s = parse_space(j).build();
  EXPECT_TRUE(s.complement_is_killing_orthogonal());
  EXPECT_EQ(s.complement(), Subspace::span(3, {QVector{1, 0, 0}, QVector{0, 1, 1}}));
}

TEST(SpaceFile, RoundTripEveryExample) {
  for (const auto& name : example_names()) {
    const auto e = build_example(name);
    const SpaceDocument d = document_from_example(e);
    const json exported = export_space(d);
    const SpaceDocument back = parse_space_text(exported.dump());
    EXPECT_EQ(export_space(back), exported) << name;
    const HomogeneousSpace s = back.build();
    EXPECT_TRUE(s.valid()) << name;
    const GoReport a = go_check(e.space), b = go_check(s);
    EXPECT_EQ(a.consistent, b.consistent) << name;
    EXPECT_EQ(a.max_residual, b.max_residual) << name;
    const auto sa = structure_pipeline(e.space, e.cartan_involution, e.levi);
    const auto sb = structure_pipeline(s, back.cartan_involution, back.levi);
    EXPECT_EQ(sa.k_nc, sb.k_nc) << name;
    EXPECT_EQ(sa.product.applies, sb.product.applies) << name;
  }
}

TEST(SpaceFile, SchemaErrorsNameTheirPath) {
  EXPECT_EQ(input_error_path(json::array()), "$");
  {
    json j = heis_json();
    j.erase("algebra");
    EXPECT_EQ(input_error_path(j), "algebra");
  }
  {
    json j = heis_json();
    j["algebra"]["brackets"][1][3] = "one";
    EXPECT_EQ(input_error_path(j), "algebra.brackets[1][3]");
  }
  {
    json j = heis_json();
    j["algebra"]["brackets"][2][1] = 7;
    EXPECT_EQ(input_error_path(j), "algebra.brackets[2][1]");
  }
  {
    json j = heis_json();
    j["algebra"]["brackets"][0] = json::array({0, 1, 2});
    EXPECT_EQ(input_error_path(j), "algebra.brackets[0]");
  }
  {
    json j = heis_json();
    j["algebra"]["labels"] = json::array({"X"});
    EXPECT_EQ(input_error_path(j), "algebra.labels");
  }
  {
    json j = heis_json();
    j["norm"]["A"] = json::array({1, 0, 0, 1});
    EXPECT_EQ(input_error_path(j).rfind("norm.A", 0), 0u);
  }
  {
    json j = heis_json();
    j["norm"]["A"] = json::parse(R"([[1, 1, 0], [0, 1, 0], [0, 0, 1]])");
    EXPECT_EQ(input_error_path(j), "norm.A");
  }
  {
    json j = heis_json();
    j["norm"]["family"] = "berwald";
    EXPECT_EQ(input_error_path(j), "norm.family");
  }
  {
    json j = heis_json();
    j["norm"]["b"] = json::array({0, 0});
    EXPECT_EQ(input_error_path(j).rfind("norm.b", 0), 0u);
  }
  {
    json j = heis_json();
    j["complement"]["mode"] = "guess";
    EXPECT_EQ(input_error_path(j), "complement.mode");
  }
  {
    json j = heis_json();
    j["subspaces"]["center"]["role"] = "mystery";
    EXPECT_EQ(input_error_path(j), "subspaces.center.role");
  }
  {
    // [X,Y] = Z and [Z,D] = X break the Jacobi identity on (X, Y, D)
    json j = heis_json();
    j["algebra"]["brackets"] = json::parse(R"([[0, 1, 2, 1], [2, 3, 0, 1]])");
    EXPECT_EQ(input_error_path(j), "algebra.brackets");
  }
  EXPECT_THROW(parse_space_text("{\"algebra\": "), InputError);
  EXPECT_THROW(read_space_file("/nonexistent/space.json"), InputError);
}

TEST(Report, DigestIsStable) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  const auto d = document_from_example(build_example("gordon"));
  EXPECT_EQ(fnv1a_hex(export_space(d).dump()), fnv1a_hex(export_space(parse_space(export_space(d))).dump()));
}

// -- CLI ---------------------------------------------------------------------

TEST_F(Cli, ExitCodeMatrix) {
  write("heis.json", kHeis);
  json bad = heis_json();
  bad["algebra"]["brackets"][0][3] = "x/y";
  write("bad_rational.json", bad.dump());
  write("truncated.json", std::string(kHeis).substr(0, 40));
  json noninv = heis_json();
  noninv["norm"]["b"] = json::array({"1/5", 0, 0});
  write("noninvariant.json", noninv.dump());

  struct Case {
    std::string args;
    int code;
  };
  const std::vector<Case> cases = {
      {"validate --example gordon", 0},
      {"validate --input " + path("heis.json"), 0},
      {"go-check --example hyperbolic2", 0},
      {"go-check --input " + path("heis.json"), 0},
      {"go-check --example filiform4", 1},
      {"go-check --example axb", 1},
      {"decompose --example gordon", 0},
      {"decompose --example filiform4", 0},
      {"totally-geodesic --example heis3", 0},
      {"totally-geodesic --example heis3 --subspace x_plus_z", 1},
      {"totally-geodesic --example heis3 --subspace nope", 2},
      {"quotient --example gordon", 0},
      {"quotient --example hyperbolic2", 2},
      {"integrate --example heis3", 0},
      {"integrate --example heis3 --y0 1,2", 2},
      {"catalog", 0},
      {"catalog --example product_h3timesheis", 0},
      {"validate --input " + path("bad_rational.json"), 2},
      {"validate --input " + path("truncated.json"), 2},
      {"validate --input " + path("noninvariant.json"), 2},
      {"go-check --input " + path("noninvariant.json"), 2},
      {"go-check --input " + path("missing.json"), 2},
      {"go-check --example nope", 2},
      {"go-check", 2},
      {"go-check --example heis3 --samples -3", 2},
      {"go-check --example heis3 --bogus", 2},
      {"frobnicate", 2},
  };
  for (const auto& c : cases) EXPECT_EQ(run(c.args + " --out " + path("r.json")), c.code) << c.args;
}

TEST_F(Cli, ReportsAreWritten) {
  ASSERT_EQ(run("go-check --example filiform4 --out " + path("f.json") + " --csv " + path("f.csv")), 1);
  const json r = report("f.json");
  EXPECT_EQ(r["command"], "go-check");
  EXPECT_EQ(r["exit_code"], 1);
  EXPECT_EQ(r["samples"], 200);
  EXPECT_EQ(r["seed"], 0);
  EXPECT_EQ(r["tool_version"], tool_version);
  EXPECT_EQ(r["input_digest"].get<std::string>().size(), 16u);
  const json& g = r["results"]["go_check"];
  EXPECT_EQ(g["verdict"], "not_GO");
  EXPECT_TRUE(g.contains("witness"));
  EXPECT_GT(g["max_residual"].get<double>(), 1e-3);
  const std::string csv = read("f.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sample_index,residual,F(u)");

  ASSERT_EQ(run("go-check --example hyperbolic2 --out " + path("h.json")), 0);
  EXPECT_LT(report("h.json")["results"]["go_check"]["max_residual"].get<double>(), 1e-12);

  ASSERT_EQ(run("decompose --example gordon --out " + path("g.json")), 0);
  const json gr = report("g.json");
  const json& st = gr["results"]["structure"];
  EXPECT_EQ(st["product_split"]["applies"], false);
  EXPECT_EQ(st["s_nc_name"], "sl(2,R)");
  EXPECT_EQ(st["base_pair"]["k"], json::parse(R"([["0", "1", "-1", "0"]])"));

  // input errors still produce a report with the failing path
  json bad = heis_json();
  bad["norm"]["family"] = "berwald";
  write("bad.json", bad.dump());
  ASSERT_EQ(run("validate --input " + path("bad.json") + " --out " + path("b.json")), 2);
  EXPECT_EQ(report("b.json")["error"]["path"], "norm.family");
}

TEST_F(Cli, DeterministicReports) {
  for (const std::string& cmd : std::vector<std::string>{"go-check --example heis3_randers", "decompose --example product_h3timesheis",
                                "integrate --example gordon --csv " + path("t.csv"), "catalog --example heis3"}) {
    ASSERT_EQ(run(cmd + " --seed 4 --out " + path("a.json")), 0) << cmd;
    const std::string csv_a = read("t.csv");
    ASSERT_EQ(run(cmd + " --seed 4 --out " + path("b.json")), 0) << cmd;
    EXPECT_EQ(report("a.json").dump(), report("b.json").dump()) << cmd;
    EXPECT_EQ(csv_a, read("t.csv"));
  }
}

TEST_F(Cli, ExportRoundTrip) {
  for (const auto& name : example_names()) {
    ASSERT_EQ(run("catalog --example " + name + " --export " + path(name + ".json") + " --out " + path("c.json")), 0)
        << name;
    ASSERT_EQ(run("go-check --example " + name + " --out " + path("x.json")), build_example(name).expected.go_consistent ? 0 : 1);
    const int code = run("go-check --input " + path(name + ".json") + " --out " + path("y.json"));
    EXPECT_EQ(code, build_example(name).expected.go_consistent ? 0 : 1) << name;
    json x = report("x.json"), y = report("y.json");
    EXPECT_EQ(x["input_digest"], y["input_digest"]) << name;
    EXPECT_EQ(x["results"], y["results"]) << name;
  }
}
