#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nashlab/cli.hpp"

namespace nashlab::cli {

namespace {

[[noreturn]] void input_error(const std::string& source, const std::string& what) {
  throw Error(ErrorKind::InputError, source + ": " + what);
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

ordered_json parse_json(const std::string& text, const std::string& source) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    input_error(source + ":" + std::to_string(line_of(text, e.byte)), "malformed JSON (" + std::string(e.what()) + ")");
  }
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json vec_json(const Vec& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InputError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

VarietySpec parse_spec(const std::string& text, const std::string& source) {
  const ordered_json doc = parse_json(text, source);
  if (!doc.is_object()) input_error(source, "spec must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) input_error(source, "missing string field 'kind'");
  VarietyKind kind;
  try {
    kind = parse_variety_kind(doc["kind"].get<std::string>());
  } catch (const Error& e) {
    input_error(source, e.what());
  }
  std::vector<std::string> vars = {"x", "y"};
  if (doc.contains("variables")) {
    if (!doc["variables"].is_array()) input_error(source, "'variables' must be an array of names");
    vars.clear();
    for (const auto& v : doc["variables"]) {
      if (!v.is_string()) input_error(source, "'variables' must be an array of names");
      vars.push_back(v.get<std::string>());
    }
  }
  VarietySpec spec;
  try {
    if (kind == VarietyKind::ParametricGraphs) {
      if (!doc.contains("graphs") || !doc["graphs"].is_array()) input_error(source, "missing array field 'graphs'");
      std::vector<GraphFunction> graphs;
      for (std::size_t i = 0; i < doc["graphs"].size(); ++i) {
        const auto& g = doc["graphs"][i];
        const std::string where = "graphs[" + std::to_string(i) + "]";
        if (!g.is_object() || !g.contains("expr") || !g["expr"].is_string()) {
          input_error(source, where + " needs a string field 'expr'");
        }
        if (!g.contains("domain") || !g["domain"].is_array() || g["domain"].size() != 2 ||
            !g["domain"][0].is_number() || !g["domain"][1].is_number()) {
          input_error(source, where + " needs 'domain': [a, b]");
        }
        graphs.emplace_back(g["expr"].get<std::string>(), g["domain"][0].get<double>(), g["domain"][1].get<double>());
      }
      spec = VarietySpec::parametric(std::move(graphs));
    } else {
      if (!doc.contains("equation") || !doc["equation"].is_string()) {
        input_error(source, "missing string field 'equation'");
      }
      const std::string eq = doc["equation"].get<std::string>();
      switch (kind) {
        case VarietyKind::ImplicitReal: spec = VarietySpec::implicit_real(eq, vars); break;
        case VarietyKind::ImplicitComplex: spec = VarietySpec::implicit_complex(eq, vars); break;
        case VarietyKind::Region: spec = VarietySpec::region(eq, vars); break;
        case VarietyKind::ParametricGraphs: break;
      }
    }
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.position(), source + ": " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InputError) throw;
    throw Error(e.kind(), source + ": " + e.what());
  }
  if (doc.contains("ambient_dim")) {
    if (!doc["ambient_dim"].is_number_unsigned()) input_error(source, "'ambient_dim' must be a positive integer");
    const auto n = doc["ambient_dim"].get<std::size_t>();
    // Complex specs may state either the complex or the real dimension.
    const bool ok = n == spec.ambient_dim || (spec.kind == VarietyKind::ImplicitComplex && n == 2);
    if (!ok) {
      input_error(source, "'ambient_dim' is " + std::to_string(n) + " but the spec has dimension " +
                              std::to_string(spec.ambient_dim));
    }
  }
  return spec;
}

VarietySpec load_spec(const std::string& path) { return parse_spec(read_file(path), path); }

ordered_json spec_to_json(const VarietySpec& spec) {
  ordered_json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["variables"] = spec.variables;
  if (spec.kind == VarietyKind::ParametricGraphs) {
    j["graphs"] = ordered_json::array();
    for (const auto& g : spec.graphs) j["graphs"].push_back({{"expr", g.text}, {"domain", {g.lo, g.hi}}});
  } else {
    j["equation"] = spec.equation_text;
  }
  j["ambient_dim"] = spec.ambient_dim;
  return j;
}

Vec parse_point(const std::string& csv, const VarietySpec& spec) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    const bool rest_blank = item.find_first_not_of(" \t", used) == std::string::npos;
    if (used == 0 || !rest_blank || !std::isfinite(v)) {
      throw Error(ErrorKind::InputError, "--point: '" + item + "' is not a number");
    }
    vals.push_back(v);
  }
  if (spec.kind == VarietyKind::ImplicitComplex && vals.size() == 2) vals.resize(4, 0.0);
  if (vals.size() != spec.ambient_dim) {
    throw Error(ErrorKind::InputError, "--point has " + std::to_string(vals.size()) + " coordinates, expected " +
                                           std::to_string(spec.ambient_dim));
  }
  return Eigen::Map<const Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

sampler::ScaleLadder ladder_for(const AnalyzeConfig& config) {
  if (config.scales < 6) throw Error(ErrorKind::InputError, "--scales must be at least 6");
  return sampler::ScaleLadder::geometric(0.1, 0.5, config.scales);
}

ordered_json subspace_to_json(const gr::Subspace& s) {
  ordered_json basis = ordered_json::array();
  for (Eigen::Index c = 0; c < s.frame().cols(); ++c) basis.push_back(vec_json(s.frame().col(c)));
  return {{"dim", s.d()}, {"basis", basis}};
}

ordered_json analysis_to_json(const regularity::Analysis& a) {
  ordered_json j;
  j["base"] = vec_json(a.base);
  j["branch_count"] = a.branch_count;
  j["half_branches"] = a.branches.size();
  j["multiplicity_parity"] = a.parity ? ordered_json(*a.parity) : ordered_json(nullptr);
  if (a.cones) {
    const auto& c = *a.cones;
    ordered_json cj;
    cj["c3_rays"] = ordered_json::array();
    for (const auto& r : c.c3_rays) cj["c3_rays"].push_back(vec_json(r));
    cj["c3_is_linear"] = c.c3_is_linear;
    cj["c3_span"] = c.c3_span ? subspace_to_json(*c.c3_span) : ordered_json(nullptr);
    cj["c4_spaces"] = ordered_json::array();
    for (const auto& s : c.c4_spaces) cj["c4_spaces"].push_back(subspace_to_json(s));
    cj["coincide_linearly"] = c.coincide_linearly;
    cj["algebraic_cone"] = ordered_json::array();
    for (const auto& s : c.algebraic_cone) cj["algebraic_cone"].push_back(subspace_to_json(s));
    j["cones"] = cj;
  } else {
    j["cones"] = nullptr;
  }
  j["fits"] = ordered_json::array();
  for (const auto& f : a.fits) {
    j["fits"].push_back({{"strategy", std::string(regularity::to_string(f.strategy))},
                         {"alpha_hat", number(f.alpha_hat)},
                         {"alpha_r2", number(f.alpha_r2)},
                         {"gamma_hat", f.gamma_hat ? number(*f.gamma_hat) : ordered_json(nullptr)},
                         {"gamma_r2", number(f.gamma_r2)},
                         {"max_ratio", number(f.max_ratio)},
                         {"ratio_slope", number(f.ratio_slope)},
                         {"ratio_slope_dist", number(f.ratio_slope_dist)},
                         {"ratio_r2", number(f.ratio_r2)},
                         {"is_bilip", f.is_bilip},
                         {"sample_count", f.sample_count},
                         {"notes", f.notes}});
  }
  j["samples"] = ordered_json::array();
  for (const auto& s : a.samples) {
    j["samples"].push_back({{"strategy", std::string(regularity::to_string(s.strategy))},
                            {"scale", number(s.scale)},
                            {"log10_dist", number(s.dist.log10_abs())},
                            {"log10_nash_dist", number(s.nash_dist.log10_abs())}});
  }
  ordered_json v;
  v["classification"] = std::string(regularity::to_string(a.verdict.classification));
  v["evidence"] = ordered_json::array();
  for (const auto& e : a.verdict.evidence) {
    v["evidence"].push_back(
        {{"tag", e.tag}, {"quantity", e.quantity}, {"measured", number(e.measured)}, {"threshold", number(e.threshold)}});
  }
  v["notes"] = a.verdict.notes;
  j["verdict"] = v;
  j["failed"] = a.failed;
  return j;
}

AnalysisReport run_analyze(const VarietySpec& spec, const std::vector<Vec>& points, const AnalyzeConfig& config) {
  const auto ladder = ladder_for(config);
  for (const auto& p : points) {
    try {
      nash::is_regular(spec, p);
    } catch (const Error& e) {
      throw Error(ErrorKind::InputError, "base point is not on the set: " + std::string(e.what()));
    }
  }
  AnalysisReport r;
  int worst = -1;
  for (const auto& p : points) {
    r.analyses.push_back(regularity::analyze(spec, p, ladder, config.seed));
    // Near a singular point the coarse rungs of a regular base can reach
    // another branch; retry there on ladders one and two decades finer.
    for (double top : {0.01, 0.001}) {
      const auto& last = r.analyses.back();
      const bool ambiguous = last.failed && !last.verdict.notes.empty() &&
                             last.verdict.notes.front().rfind("BranchPairingAmbiguous", 0) == 0;
      if (!ambiguous || !nash::is_regular(spec, p)) break;
      regularity::Analysis retry =
          regularity::analyze(spec, p, sampler::ScaleLadder::geometric(top, 0.5, config.scales), config.seed);
      retry.verdict.notes.push_back("ladder shrunk to top rung " + std::to_string(top) + " after ambiguous pairing");
      r.analyses.back() = std::move(retry);
    }
    const auto& a = r.analyses.back();
    r.failed = r.failed || a.failed;
    if (regularity::severity(a.verdict.classification) > worst) {
      worst = regularity::severity(a.verdict.classification);
      r.overall = a.verdict.classification;
    }
  }
  const nash::ConeTolerances tol;
  ordered_json& j = r.json;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["config"] = {{"ladder", ladder.scales},
                 {"seed", config.seed},
                 {"tolerances",
                  {{"c4_delta", tol.c4_delta},
                   {"c3_angle", tol.c3_angle},
                   {"stability", tol.stability},
                   {"coincide_delta", tol.coincide_delta},
                   {"bilip_ratio_slope", 0.05},
                   {"fit_rungs", 6}}}};
  j["spec"] = spec_to_json(spec);
  j["analyses"] = ordered_json::array();
  for (const auto& a : r.analyses) j["analyses"].push_back(analysis_to_json(a));
  j["overall"] = std::string(regularity::to_string(r.overall));
  j["failed"] = r.failed;
  return r;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, path + ": cannot open for writing");
  out << content;
  if (!out) throw Error(ErrorKind::IoError, path + ": write failed");
}

gr::Subspace parse_frame(const std::string& text, const std::string& source) {
  const ordered_json doc = parse_json(text, source);
  if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array() || doc["columns"].empty()) {
    input_error(source, "frame needs a non-empty array field 'columns'");
  }
  std::vector<Vec> cols;
  for (const auto& c : doc["columns"]) {
    if (!c.is_array() || c.empty()) input_error(source, "each column must be a non-empty array of numbers");
    Vec v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_number()) input_error(source, "each column must be a non-empty array of numbers");
      v[static_cast<Eigen::Index>(i)] = c[i].get<double>();
    }
    if (!cols.empty() && v.size() != cols.front().size()) input_error(source, "columns differ in length");
    cols.push_back(v);
  }
  try {
    return gr::Subspace::from_spanning(cols);
  } catch (const Error& e) {
    input_error(source, e.what());
  }
}

}  // namespace nashlab::cli
