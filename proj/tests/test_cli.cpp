#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "nashlab/cli.hpp"

using namespace nashlab;
using nashlab::cli::ordered_json;
using gr::Vec;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

std::string temp_path(const std::string& name) { return std::string(NASHLAB_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(NASHLAB_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

cli::AnalysisReport analyze_at(const std::string& spec_json, const Vec& p) {
  return cli::run_analyze(cli::parse_spec(spec_json), {p}, cli::AnalyzeConfig{});
}

}  // namespace

TEST_CASE("spec documents parse into every kind") {
  const auto real = cli::parse_spec(R"({"kind": "implicit-real", "variables": ["x", "y"], "equation": "x^2 - y^3"})");
  CHECK(real.kind == VarietyKind::ImplicitReal);
  CHECK(real.ambient_dim == 2);

  const auto cplx = cli::parse_spec(R"({"kind": "implicit-complex", "equation": "x^2 - y^3", "ambient_dim": 2})");
  CHECK(cplx.kind == VarietyKind::ImplicitComplex);
  CHECK(cplx.ambient_dim == 4);

  const auto graphs = cli::parse_spec(
      R"({"kind": "parametric-graphs", "graphs": [{"expr": "x^2", "domain": [0, 1]}, {"expr": "-x^2", "domain": [-1, 0]}]})");
  REQUIRE(graphs.graphs.size() == 2);
  CHECK(graphs.graphs[1].lo == -1.0);

  const auto region = cli::parse_spec(R"({"kind": "region", "equation": "y^2 - x^3"})");
  CHECK(region.kind == VarietyKind::Region);

  // Round trip through the report echo.
  const auto again = cli::parse_spec(cli::spec_to_json(graphs).dump());
  CHECK(cli::spec_to_json(again) == cli::spec_to_json(graphs));
}

TEST_CASE("spec errors name the source and the line") {
  const auto message = [](const std::string& text) {
    try {
      cli::parse_spec(text, "spec.json");
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string bad_json = message("{\"kind\": \"region\",\n\"equation\": \"y\",,\n}");
  CHECK(bad_json.find("spec.json:2") != std::string::npos);
  CHECK(message(R"({"kind": "torus", "equation": "x"})").find("spec.json") != std::string::npos);
  CHECK(message(R"({"kind": "implicit-real"})").find("equation") != std::string::npos);
  CHECK(message(R"({"kind": "parametric-graphs", "graphs": [{"expr": "x"}]})").find("domain") != std::string::npos);
  CHECK(message(R"({"kind": "implicit-real", "equation": "x^2 - y", "ambient_dim": 3})").find("ambient_dim") !=
        std::string::npos);
  CHECK_THROWS_AS(cli::parse_spec(R"({"kind": "implicit-real", "equation": "x^2 - z"})"), Error);
  CHECK_THROWS_AS(cli::parse_spec(R"({"kind": "implicit-real", "equation": "x^2 +* y"})"), Error);
}

TEST_CASE("point parsing") {
  const auto real = VarietySpec::implicit_real("x^2 - y^3", {"x", "y"});
  CHECK(cli::parse_point("0.5, -2", real).isApprox(v2(0.5, -2)));
  CHECK_THROWS_AS(cli::parse_point("1,2,3", real), Error);
  CHECK_THROWS_AS(cli::parse_point("1,abc", real), Error);
  CHECK_THROWS_AS(cli::parse_point("1,2x", real), Error);

  const auto cplx = VarietySpec::implicit_complex("x^2 - y^3");
  const Vec p = cli::parse_point("1,1", cplx);
  REQUIRE(p.size() == 4);
  CHECK(p[2] == 0.0);
  CHECK(p[3] == 0.0);
  CHECK(cli::parse_point("1,2,3,4", cplx)[3] == 4.0);
}

TEST_CASE("analyze verdicts on the three reference sets") {
  const auto cusp = analyze_at(R"({"kind": "implicit-real", "equation": "x^2 - y^3"})", v2(0, 0));
  CHECK(cusp.overall == regularity::Classification::CriterionInapplicable);
  const auto& notes = cusp.analyses.front().verdict.notes;
  CHECK(std::any_of(notes.begin(), notes.end(), [](const std::string& n) { return n.rfind("not-C1", 0) == 0; }));
  double alpha = INFINITY;
  for (const auto& f : cusp.analyses.front().fits) alpha = std::min(alpha, f.alpha_hat);
  CHECK(alpha == doctest::Approx(1.0 / 3.0).epsilon(0.09));

  const auto circle = analyze_at(R"({"kind": "implicit-real", "equation": "x^2 + y^2 - 1"})", v2(1, 0));
  CHECK(circle.overall == regularity::Classification::C11Submanifold);
  CHECK_FALSE(circle.failed);

  const auto z = analyze_at(R"({"kind": "region", "equation": "y^2 - x^3"})", v2(0, 0));
  CHECK(z.overall == regularity::Classification::CriterionInapplicable);

  CHECK_THROWS_AS(analyze_at(R"({"kind": "implicit-real", "equation": "x^2 + y^2 - 1"})", v2(0, 0)), Error);
}

TEST_CASE("report schema and configuration echo") {
  const auto r = analyze_at(R"({"kind": "implicit-real", "equation": "x^2 + y^2 - 1"})", v2(1, 0));
  const ordered_json& j = r.json;
  CHECK(j["schema_version"] == cli::kSchemaVersion);
  CHECK(j["tool_version"] == cli::kToolVersion);
  CHECK(j["config"]["seed"] == 0);
  CHECK(j["config"]["ladder"].size() == 12);
  CHECK(j["config"]["tolerances"].contains("c4_delta"));
  CHECK(j["spec"]["equation"] == "x^2 + y^2 - 1");
  REQUIRE(j["analyses"].size() == 1);
  const auto& a = j["analyses"][0];
  for (const char* key : {"base", "branch_count", "multiplicity_parity", "cones", "fits", "samples", "verdict"}) {
    CHECK_MESSAGE(a.contains(key), key);
  }
  CHECK(a["verdict"]["evidence"].size() >= 1);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string spec = R"({"kind": "implicit-real", "equation": "y^2 - x^5"})";
  const auto a = cli::dump(analyze_at(spec, v2(0, 0)).json);
  const auto b = cli::dump(analyze_at(spec, v2(0, 0)).json);
  CHECK(a == b);

  ordered_json ja, jb;
  cli::run_example_suite({"cusp", "Z"}, 0, &ja);
  cli::run_example_suite({"cusp", "Z"}, 0, &jb);
  CHECK(cli::dump(ja) == cli::dump(jb));
}

TEST_CASE("plot annotations") {
  const auto cusp = analyze_at(R"({"kind": "implicit-real", "equation": "x^2 - y^3"})", v2(0, 0));
  const auto svg = cli::render_svg(cli::parse_spec(R"({"kind": "implicit-real", "equation": "x^2 - y^3"})"),
                                   cusp.analyses.front());
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("α̂ = 0.33") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);

  const auto circle_spec = cli::parse_spec(R"({"kind": "implicit-real", "equation": "x^2 + y^2 - 1"})");
  const auto circle = cli::run_analyze(circle_spec, {v2(1, 0)}, cli::AnalyzeConfig{});
  CHECK(cli::render_svg(circle_spec, circle.analyses.front()).find("α̂ = 1.00") != std::string::npos);

  regularity::Analysis empty;
  CHECK_THROWS_AS(cli::render_svg(circle_spec, empty), Error);
}

TEST_CASE("frames and the subspace distance") {
  const auto a = cli::parse_frame(R"({"columns": [[1, 0, 0]]})");
  const auto b = cli::parse_frame(R"({"columns": [[1, 1, 0]]})");
  // Lines at 45 degrees: delta = 2 sin(pi/8).
  CHECK(gr::delta(a, b) == doctest::Approx(2 * std::sin(std::numbers::pi / 8)).epsilon(1e-12));
  CHECK_THROWS_AS(cli::parse_frame(R"({"columns": [[1, 0], [1]]})"), Error);
  CHECK_THROWS_AS(cli::parse_frame(R"({"rows": []})"), Error);
}

TEST_CASE("example ids are unique and selectable") {
  const auto ids = cli::example_ids();
  CHECK(ids.size() >= 12);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t k = i + 1; k < ids.size(); ++k) CHECK(ids[i] != ids[k]);
  }
  const auto rows = cli::run_example_suite({"Xk k=2"});
  REQUIRE(!rows.empty());
  for (const auto& r : rows) CHECK(r.id == "Xk k=2");
  CHECK(cli::format_table(rows).find("PASS") != std::string::npos);
}

TEST_CASE("tool exit codes") {
  const std::string spec = temp_path("cli_circle.json");
  cli::write_file(spec, R"({"kind": "implicit-real", "equation": "x^2 + y^2 - 1"})");
  const std::string report = temp_path("cli_report.json");
  CHECK(run_tool("analyze --input " + spec + " --point 1,0 --report " + report) == 0);
  CHECK(ordered_json::parse(slurp(report))["overall"] == "C11-submanifold");

  CHECK(run_tool("analyze --input " + spec + " --point 0,0 --report " + report) == 1);
  CHECK(run_tool("analyze --input " + temp_path("missing.json") + " --point 0,0 --report " + report) == 1);
  CHECK(run_tool("analyze --input " + spec + " --point 1,0 --scales 3 --report " + report) == 1);
  CHECK(run_tool("frobnicate") == 1);
  CHECK(run_tool("examples --only circle") == 0);
  std::remove(spec.c_str());
  std::remove(report.c_str());
}
