// nash-lab: command-line front end.
//
//   nash-lab analyze --input spec.json [--point x,y]... [--scales N] [--seed S] --report out.json [--plot out.svg]
//   nash-lab examples [--only id,...] [--seed S] [--report out.json]
//   nash-lab gr-dist --a frame.json --b frame.json
//
// Exit codes: 0 ok, 1 input error, 2 analysis error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nashlab/cli.hpp"

using namespace nashlab;
using gr::Vec;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kAnalysisError = 2;

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownVariable:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ZeroPolynomial:
    case ErrorKind::UnsupportedSpec:
    case ErrorKind::InputError:
    case ErrorKind::BasePointNotOnVariety:
    case ErrorKind::NotOnVariety:
      return true;
    default:
      return false;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_analyze(const std::string& input, const std::vector<std::string>& points, std::size_t scales,
                std::uint64_t seed, const std::string& report, const std::string& plot) {
  const VarietySpec spec = cli::load_spec(input);
  std::vector<Vec> bases;
  for (const auto& p : points) bases.push_back(cli::parse_point(p, spec));
  if (bases.empty()) bases = regularity::default_probes(spec, 8, seed);
  if (bases.empty()) throw Error(ErrorKind::InputError, "no --point given and no probe point found on the set");
  const cli::AnalyzeConfig config{scales, seed};
  const cli::AnalysisReport r = cli::run_analyze(spec, bases, config);
  cli::write_file(report, cli::dump(r.json));
  if (!plot.empty()) cli::write_file(plot, cli::render_svg(spec, r.analyses.front()));
  for (const auto& a : r.analyses) {
    std::cout << "point";
    for (Eigen::Index i = 0; i < a.base.size(); ++i) std::cout << (i == 0 ? " (" : ", ") << a.base[i];
    std::cout << "): " << regularity::to_string(a.verdict.classification) << "\n";
  }
  std::cout << "overall: " << regularity::to_string(r.overall) << "\n";
  return r.failed ? kAnalysisError : kOk;
}

int run_examples(const std::string& only, std::uint64_t seed, const std::string& report) {
  cli::ordered_json j;
  const auto rows = cli::run_example_suite(split_ids(only), seed, report.empty() ? nullptr : &j);
  std::cout << cli::format_table(rows);
  if (!report.empty()) cli::write_file(report, cli::dump(j));
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const cli::ExampleRow& r) { return r.pass; });
  return ok ? kOk : kAnalysisError;
}

int run_gr_dist(const std::string& a_path, const std::string& b_path) {
  const gr::Subspace a = cli::parse_frame(slurp(a_path), a_path);
  const gr::Subspace b = cli::parse_frame(slurp(b_path), b_path);
  if (a.n() != b.n() || a.d() != b.d()) {
    throw Error(ErrorKind::InputError, "frames span subspaces of different shape");
  }
  cli::ordered_json out;
  out["delta"] = gr::delta(a, b);
  out["principal_angles"] = gr::principal_angles(a, b);
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash-lift regularity laboratory"};
  app.require_subcommand(1);

  std::string input, report, plot, only, frame_a, frame_b;
  std::vector<std::string> points;
  std::size_t scales = 12;
  std::uint64_t seed = 0;

  auto* analyze = app.add_subcommand("analyze", "analyze a set at one or more base points");
  analyze->add_option("--input", input, "spec JSON file")->required();
  analyze->add_option("--point", points, "base point as comma-separated coordinates (repeatable)");
  analyze->add_option("--scales", scales, "number of ladder rungs 0.1 * 2^-j")->capture_default_str();
  analyze->add_option("--seed", seed, "random seed")->capture_default_str();
  analyze->add_option("--report", report, "output report JSON")->required();
  analyze->add_option("--plot", plot, "output SVG plot");

  auto* examples = app.add_subcommand("examples", "run the built-in example corpus");
  examples->add_option("--only", only, "comma-separated example ids");
  examples->add_option("--seed", seed, "random seed")->capture_default_str();
  examples->add_option("--report", report, "output report JSON");

  auto* grdist = app.add_subcommand("gr-dist", "Grassmannian distance of two subspaces");
  grdist->add_option("--a", frame_a, "first frame JSON")->required();
  grdist->add_option("--b", frame_b, "second frame JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*analyze) return run_analyze(input, points, scales, seed, report, plot);
    if (*examples) return run_examples(only, seed, report);
    if (*grdist) return run_gr_dist(frame_a, frame_b);
  } catch (const Error& e) {
    std::cerr << "nash-lab: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kInputError : kAnalysisError;
  }
  return kOk;
}
