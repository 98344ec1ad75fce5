// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "nashlab/cli.hpp"

using namespace nashlab;
using gr::Vec;
using regularity::Classification;
using regularity::Strategy;
using sampler::ScaleLadder;

namespace {

// Pinned tolerances.
constexpr double kAlphaTol = 0.03;
constexpr double kRatioSlopeTol = 0.05;
constexpr double kOracleTol = 1e-3;
constexpr std::size_t kOracleSamples = 10000;
constexpr int kOraclePairs = 500;
constexpr int kAxiomTriples = 10000;
constexpr double kTriangleSlack = -1e-10;
constexpr double kMarginFloor = -1e-12;
constexpr std::size_t kInequalityTrials = 100000;
constexpr double kLambda = 4.0;
constexpr double kLemmaRatioTail = 1e-3;
constexpr double kLemmaLoglipTail = 1e3;
constexpr double kConeDelta = 0.05;
constexpr double kNodeSeparation = 0.4;
constexpr double kSlopeTol = 0.05;
constexpr int kMaxDissent = 1;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

VarietySpec curve(const std::string& eq) { return VarietySpec::implicit_real(eq, {"x", "y"}); }

const regularity::ModulusFit* fit_of(const regularity::Analysis& a, Strategy s) {
  for (const auto& f : a.fits) {
    if (f.strategy == s) return &f;
  }
  return nullptr;
}

bool all_bilip(const regularity::Analysis& a) {
  return !a.fits.empty() && std::all_of(a.fits.begin(), a.fits.end(), [](const auto& f) { return f.is_bilip; });
}

bool has_note(const regularity::Analysis& a, const std::string& prefix) {
  return std::any_of(a.verdict.notes.begin(), a.verdict.notes.end(),
                     [&](const std::string& n) { return n.rfind(prefix, 0) == 0; });
}

// --- criteria ----------------------------------------------------------------

void exponent_table(Outcome& o) {
  const double expected[] = {1.0 / 3.0, 3.0 / 5.0, 5.0 / 7.0};
  for (int k = 1; k <= 3; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = regularity::analyze(curve("y^2 - x^" + std::to_string(2 * k + 1)), v2(0, 0),
                                       ScaleLadder::geometric());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto* f = fit_of(a, Strategy::CrossBranch);
    const double alpha = f ? f->alpha_hat : NAN;
    o.detail << " k=" << k << ": alpha=" << alpha;
    o.require(std::fabs(alpha - expected[k - 1]) <= kAlphaTol, "alpha k=" + std::to_string(k));
    o.require(secs < 5.0, "runtime k=" + std::to_string(k));
  }
}

void metric_dichotomy(Outcome& o) {
  const auto line = regularity::analyze(VarietySpec::implicit_complex("x + y"), Vec::Zero(4), ScaleLadder::geometric());
  o.detail << " line: " << regularity::to_string(line.verdict.classification);
  o.require(all_bilip(line), "line bilip");
  o.require(line.verdict.classification == Classification::SmoothBiLipschitz, "line verdict");

  const auto cusp =
      regularity::analyze(VarietySpec::implicit_complex("x^2 - y^3"), Vec::Zero(4), ScaleLadder::geometric());
  const std::size_t c4 = cusp.cones ? cusp.cones->c4_spaces.size() : 0;
  const auto* f = fit_of(cusp, Strategy::CrossBranch);
  const double slope = f ? f->ratio_slope_dist : NAN;
  o.detail << "; cusp: C4=" << c4 << " ratio_slope(dist)=" << slope << " "
           << regularity::to_string(cusp.verdict.classification);
  o.require(c4 == 1, "single limit tangent");
  o.require(!all_bilip(cusp), "cusp bilip false");
  o.require(std::fabs(slope + 2.0 / 3.0) <= kRatioSlopeTol, "ratio slope");
  o.require(cusp.verdict.classification == Classification::NotC1, "cusp verdict singular");
}

void grassmannian_closed_form(Outcome& o) {
  std::mt19937_64 rng(20);
  const std::pair<std::size_t, std::size_t> shapes[] = {{2, 1}, {3, 1}, {4, 2}};
  double worst = 0.0;
  for (const auto& [n, d] : shapes) {
    for (int i = 0; i < kOraclePairs; ++i) {
      const auto a = gr::random_subspace(n, d, rng);
      const auto b = gr::random_subspace(n, d, rng);
      worst = std::max(worst, std::fabs(gr::delta(a, b) - gr::hausdorff_delta_oracle(a, b, kOracleSamples, i)));
    }
  }
  double slack = INFINITY, asym = 0.0, self = 0.0;
  for (int i = 0; i < kAxiomTriples; ++i) {
    const auto& [n, d] = shapes[i % 3];
    const auto a = gr::random_subspace(n, d, rng);
    const auto b = gr::random_subspace(n, d, rng);
    const auto c = gr::random_subspace(n, d, rng);
    slack = std::min(slack, gr::delta(a, b) + gr::delta(b, c) - gr::delta(a, c));
    asym = std::max(asym, std::fabs(gr::delta(a, b) - gr::delta(b, a)));
    self = std::max(self, gr::delta(a, a));
  }
  o.detail << " max |delta - oracle|=" << worst << " min triangle slack=" << slack;
  o.require(worst <= kOracleTol, "oracle agreement");
  o.require(slack >= kTriangleSlack, "triangle inequality");
  o.require(asym == 0.0, "symmetry");
  o.require(self <= 1e-12, "identity");
}

void key_inequality(Outcome& o) {
  const auto r = regularity::random_quadratic_trials(kInequalityTrials, kLambda, 0);
  o.detail << " trials=" << r.trials << " min margin=" << r.min_margin;
  o.require(r.trials == kInequalityTrials, "trial count");
  o.require(r.min_margin >= kMarginFloor, "margin");
}

void lemma_suite(Outcome& o) {
  for (const char* text : {"x^2", "x^(5/2)", "x^3*exp(-1/x)", "x^3*exp(-1/x^2)"}) {
    const auto g = poly::Expr::parse(text);
    const auto ratio = regularity::verify_lemma_ratio(g);
    const auto loglip = regularity::verify_lemma_loglip(g);
    const double rt = std::fabs(ratio.tail.to_double());
    const double lt = std::fabs(loglip.tail.to_double());
    o.detail << " " << text << ": " << rt << "/" << lt;
    o.require(rt < kLemmaRatioTail && ratio.monotone, std::string("ratio ") + text);
    o.require(lt > kLemmaLoglipTail && loglip.monotone, std::string("loglip ") + text);
  }
}

VarietySpec exp_pair(int m, double lo) {
  const std::string e = "exp(-1/x^" + std::to_string(m) + ")";
  return VarietySpec::parametric({GraphFunction("x^3*" + e, lo, 1), GraphFunction("-x^3*" + e, lo, 1)});
}

void counterexamples(Outcome& o) {
  struct Case {
    std::string name;
    VarietySpec spec;
    double bounded_at, divergent_at;
  };
  const Case cases[] = {
      {"f_pm", VarietySpec::parametric({GraphFunction("x^3*exp(-1/x)", 0, 1), GraphFunction("-x^3*exp(-1/x)", 0, 1),
                                        GraphFunction("0", -1, 0)}),
       2.2, 1.5},
      {"h_pm", exp_pair(2, -1), 1.7, 1.0},
  };
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = regularity::analyze(c.spec, v2(0, 0), ScaleLadder::geometric());
    const auto pairs = regularity::sample_pairs(c.spec, v2(0, 0), ScaleLadder::geometric(), Strategy::CrossBranch);
    const auto hi = regularity::loglip_boundedness(pairs, c.bounded_at);
    const auto lo = regularity::loglip_boundedness(pairs, c.divergent_at);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool coincide = a.cones && a.cones->coincide_linearly;
    o.detail << " " << c.name << ": coincide=" << coincide << " bilip=" << all_bilip(a) << " growth=" << lo.growth;
    o.require(coincide, c.name + " coincide");
    o.require(!all_bilip(a), c.name + " bilip false");
    o.require(hi.bounded, c.name + " bounded");
    o.require(lo.divergent && lo.growth > 10.0, c.name + " divergent");
    o.require(secs < 10.0, c.name + " runtime");
  }
}

void example_z(Outcome& o) {
  const VarietySpec z = VarietySpec::region("y^2 - x^3", {"x", "y"});
  const auto a = regularity::analyze(z, v2(0, 0), ScaleLadder::geometric());
  const auto at0 = nash::nash_lift(z, v2(0, 0), ScaleLadder::geometric()).tangent;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const Vec p = v2(x, (2 * u(rng) - 1) * std::pow(x, 1.5));
    worst = std::max(worst, gr::delta(at0, nash::tangent_space(z, p)));
  }
  const bool coincide = a.cones && a.cones->coincide_linearly;
  o.detail << " max delta=" << worst << " coincide=" << coincide << " "
           << regularity::to_string(a.verdict.classification);
  o.require(worst == 0.0, "constant tangent lift");
  o.require(!coincide, "coincide false");
  o.require(a.verdict.classification == Classification::CriterionInapplicable, "verdict");
  o.require(has_note(a, "not-C1"), "not-C1 note");
}

void multiplicity_parity(Outcome& o) {
  const auto parity_at = [](const VarietySpec& spec, const Vec& base) {
    const auto proj = sampler::choose_projection(spec, base);
    return sampler::multiplicity_mod2(spec, base, proj.direction, proj.cone);
  };
  for (const char* eq : {"x^2 - y^3", "y^2 - x^5"}) {
    const auto r = parity_at(curve(eq), v2(0, 0));
    o.detail << " " << eq << ": " << r.parity << " (dissent " << r.dissent << ")";
    o.require(r.parity == 0 && r.dissent <= kMaxDissent, eq);
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  int ok = 0;
  for (int i = 0; i < 20; ++i) {
    const double phi = ang(rng);
    const auto r = parity_at(curve("x^2 + y^2 - 1"), v2(std::cos(phi), std::sin(phi)));
    ok += r.parity == 1 && r.dissent <= kMaxDissent;
  }
  o.detail << " circle: " << ok << "/20";
  o.require(ok == 20, "circle parity");
}

void cone_test(Outcome& o) {
  for (int k = 1; k <= 2; ++k) {
    const auto rep = nash::coincide_linearly(curve("x^4 - y^" + std::to_string(4 * k + 2)), v2(0, 0),
                                             ScaleLadder::geometric());
    double d = INFINITY;
    if (rep.c3_span && rep.c4_spaces.size() == 1) d = gr::delta(*rep.c3_span, rep.c4_spaces.front());
    o.detail << " Y_" << k << ": linear=" << rep.c3_is_linear << " delta=" << d;
    o.require(rep.c3_is_linear && d < kConeDelta, "Y_" + std::to_string(k));
  }
  const VarietySpec node = curve("y^2 - x^2*(x+1)");
  bool not_injective = false;
  try {
    nash::nash_lift(node, v2(0, 0), ScaleLadder::geometric());
  } catch (const Error& e) {
    not_injective = e.kind() == ErrorKind::NotInjective;
  }
  const auto c4 = nash::compute_C4(node, v2(0, 0), ScaleLadder::geometric());
  o.detail << " node: C4=" << c4.size();
  o.require(not_injective, "node NotInjective");
  o.require(c4.size() == 2, "node clusters");
  if (c4.size() == 2) {
    const double sep = gr::delta(c4[0], c4[1]);
    std::vector<double> slopes;
    for (const auto& s : c4) slopes.push_back(s.frame()(1, 0) / s.frame()(0, 0));
    std::sort(slopes.begin(), slopes.end());
    o.detail << " separation=" << sep << " slopes=" << slopes[0] << "," << slopes[1];
    o.require(sep > kNodeSeparation, "node separation");
    o.require(std::fabs(slopes[0] + 1) < kSlopeTol && std::fabs(slopes[1] - 1) < kSlopeTol, "node slopes");
  }
}

void determinism(Outcome& o) {
  cli::ordered_json a, b;
  cli::run_example_suite({}, 0, &a);
  cli::run_example_suite({}, 0, &b);
  const std::string sa = cli::dump(a), sb = cli::dump(b);
  o.detail << " report bytes=" << sa.size();
  o.require(sa == sb, "byte-identical reports");
}

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "exponent table for y^2 = x^(2k+1)", 15.0, exponent_table},
      {2, "metric dichotomy for complex line and cusp", 10.0, metric_dichotomy},
      {3, "Grassmannian closed form and metric axioms", 30.0, grassmannian_closed_form},
      {4, "tangent-derivative inequality, lambda = 4", 20.0, key_inequality},
      {5, "calculus lemma suite", 5.0, lemma_suite},
      {6, "exponential counterexamples", 20.0, counterexamples},
      {7, "region Z", 5.0, example_z},
      {8, "multiplicity parity", 5.0, multiplicity_parity},
      {9, "Y_k cones and node", 5.0, cone_test},
      {10, "example suite determinism", 120.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit_s) {
      o.pass = false;
      o.detail << " [over time limit " << c.limit_s << " s]";
    }
    failures += !o.pass;
    std::printf("%s  %2d  %s (%.2f s):%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
