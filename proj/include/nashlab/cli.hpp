#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nashlab/regularity.hpp"

namespace nashlab::cli {

using gr::Vec;
using nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Spec documents:
//   {"kind": "implicit-real" | "implicit-complex" | "parametric-graphs" | "region",
//    "variables": [...], "equation": "...", "ambient_dim": n}
//   {"kind": "parametric-graphs", "graphs": [{"expr": "...", "domain": [a, b]}]}
// Failures are InputError (or SyntaxError / UnknownVariable from the
// expression parsers) with the source name and, for JSON syntax, the line.
VarietySpec parse_spec(const std::string& text, const std::string& source = "<input>");
VarietySpec load_spec(const std::string& path);
ordered_json spec_to_json(const VarietySpec& spec);

// "x,y" for real specs; complex specs take "Re x,Re y" or "Re x,Re y,Im x,Im y".
Vec parse_point(const std::string& csv, const VarietySpec& spec);

struct AnalyzeConfig {
  std::size_t scales = 12;
  std::uint64_t seed = 0;
};

sampler::ScaleLadder ladder_for(const AnalyzeConfig& config);

struct AnalysisReport {
  std::vector<regularity::Analysis> analyses;
  regularity::Classification overall = regularity::Classification::CriterionInapplicable;
  bool failed = false;  // some analysis ended in an error
  ordered_json json;
};

// Analyses every point; the overall classification is the most severe one.
// Points off the set raise InputError before any analysis runs.
AnalysisReport run_analyze(const VarietySpec& spec, const std::vector<Vec>& points, const AnalyzeConfig& config);

ordered_json analysis_to_json(const regularity::Analysis& a);
ordered_json subspace_to_json(const gr::Subspace& s);
std::string dump(const ordered_json& j);

// Two-panel SVG: the set near the base point and the log-log pair scatter
// with the fitted Hoelder line. Needs at least 6 pair samples.
std::string render_svg(const VarietySpec& spec, const regularity::Analysis& a);
void write_file(const std::string& path, const std::string& content);

struct ExampleRow {
  std::string id;
  std::string quantity;
  std::string expected;
  std::string measured;
  bool pass = false;
  bool info = false;  // reported only; never fails the suite
};

std::vector<std::string> example_ids();
// Runs the built-in corpus with pinned ladders and seed. When `report` is
// given it receives the full measured record.
std::vector<ExampleRow> run_example_suite(const std::vector<std::string>& only, std::uint64_t seed = 0,
                                          ordered_json* report = nullptr);
std::string format_table(const std::vector<ExampleRow>& rows);

// {"columns": [[...], ...]}: spanning vectors of a subspace.
gr::Subspace parse_frame(const std::string& text, const std::string& source = "<input>");

}  // namespace nashlab::cli
