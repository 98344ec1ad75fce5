#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nashlab/ext_real.hpp"
#include "nashlab/nash.hpp"

namespace nashlab::regularity {

using gr::Mat;
using gr::Vec;
using sampler::Branch;
using sampler::ScaleLadder;

enum class Strategy { CrossBranch, WithinBranch };
std::string_view to_string(Strategy s);

// A pair of regular points and the two distances compared by the moduli.
// Distances are extended reals: on flat graphs such as x^3 exp(-1/x) both
// fall far below the double range at small scales.
struct PairSample {
  Vec p;
  Vec q;
  ExtReal dist;       // |p - q|
  ExtReal nash_dist;  // max(|p - q|, delta(T_p, T_q))
  double scale = 0.0;
  Strategy strategy = Strategy::CrossBranch;
};

// Cross-branch: points of distinct branches on the same side and rung.
// Within-branch: consecutive rungs of one branch; scale is the finer rung.
std::vector<PairSample> sample_pairs(const VarietySpec& spec, const std::vector<Branch>& branches, Strategy strategy);
// Also checks that eta^-1 is single-valued over base (NotInjective otherwise).
std::vector<PairSample> sample_pairs(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                     Strategy strategy, std::uint64_t seed = 0);

// delta between the tangent lines of slopes a and b, in extended precision.
ExtReal slope_delta(const ExtReal& a, const ExtReal& b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Samples belonging to the `rungs` smallest scales.
std::vector<PairSample> finest_rungs(const std::vector<PairSample>& samples, std::size_t rungs = 6);

// Slope of log nash_dist against log dist over the 6 finest rungs, clamped to (0, 1.05].
LinearFit fit_holder(const std::vector<PairSample>& samples);
// Slope of log(nash_dist / dist) against log|log dist| over the 6 finest rungs.
LinearFit fit_loglip(const std::vector<PairSample>& samples);

struct BilipResult {
  bool is_bilip = false;
  double max_ratio = 0.0;         // sup nash_dist / dist
  double ratio_slope = 0.0;       // d log(ratio) / d log(scale), 6 finest rungs
  double ratio_slope_dist = 0.0;  // d log(ratio) / d log(dist), reported alongside
  double r_squared = 1.0;
};

BilipResult bilip_test(const std::vector<PairSample>& samples);

struct ModulusFit {
  Strategy strategy = Strategy::CrossBranch;
  double alpha_hat = 0.0;
  double alpha_r2 = 1.0;
  double alpha_intercept = 0.0;
  std::optional<double> gamma_hat;  // unset when the log-Lipschitz fit does not apply
  double gamma_r2 = 1.0;
  double max_ratio = 0.0;
  double ratio_slope = 0.0;
  double ratio_slope_dist = 0.0;
  double ratio_r2 = 1.0;
  bool is_bilip = false;
  std::size_t sample_count = 0;
  std::vector<std::string> notes;
};

ModulusFit fit_modulus(const std::vector<PairSample>& samples, Strategy strategy);

// Per-rung v_j = max ratio / |log dist|^gamma, coarsest rung first.
// bounded:   max v <= 3 v_coarsest
// divergent: v_finest > 10 v_coarsest and v increases over the finer half
struct GammaCheck {
  double gamma = 0.0;
  std::vector<double> scales;
  std::vector<double> values;
  bool bounded = false;
  bool divergent = false;
  double growth = 0.0;  // v_finest / v_coarsest
};

GammaCheck loglip_boundedness(const std::vector<PairSample>& samples, double gamma);

// delta(T_i, T_j) - K * |Df_i - Df_j| for graphs of maps R^k -> R^m with
// derivatives dfi, dfj (m x k) at one point; K = sqrt2 / (2 lambda sqrt(1 + lambda^2)).
double tangent_derivative_margin(const Mat& dfi, const Mat& dfj, double lambda);
double inequality_constant(double lambda);

struct InequalityReport {
  double min_margin = 0.0;
  std::size_t trials = 0;
  Vec worst_point;
};

InequalityReport check_tangent_derivative_inequality(const GraphFunction& fi, const GraphFunction& fj,
                                                     double lambda, const std::vector<double>& xs);
// Pairs of random quadratics R^2 -> R with |Df| <= lambda on [-1, 1]^2,
// one random trial point each.
InequalityReport random_quadratic_trials(std::size_t trials, double lambda, std::uint64_t seed = 0);

struct LemmaReport {
  std::vector<double> t;        // 0.1 * 2^-j, j = 0..20
  std::vector<ExtReal> values;
  ExtReal tail;
  bool monotone = false;  // |value| strictly decreasing (ratio) or increasing (loglip)
  bool limit_ok = false;  // ratio: tail tends to 0; loglip: tail below -1e3
};

// g(t) / g'(t) on the dyadic grid.
LemmaReport verify_lemma_ratio(const poly::Expr& g);
// g'(t) / (g(t) log g(t)) on the dyadic grid.
LemmaReport verify_lemma_loglip(const poly::Expr& g);

enum class Classification { SmoothBiLipschitz, C11Submanifold, NotC1, CriterionInapplicable, EtaNotInjective };
std::string_view to_string(Classification c);
// Severity used to combine verdicts over several probe points; larger is worse.
int severity(Classification c);

struct Evidence {
  std::string tag;
  std::string quantity;
  double measured = 0.0;
  double threshold = 0.0;
};

struct Verdict {
  Classification classification = Classification::CriterionInapplicable;
  std::vector<Evidence> evidence;
  std::vector<std::string> notes;
};

// Everything computed for one base point.
struct Analysis {
  Vec base;
  std::vector<Branch> branches;
  std::optional<nash::TangentConeReport> cones;
  std::optional<int> parity;
  std::size_t branch_count = 0;
  std::vector<PairSample> samples;  // all strategies
  std::vector<ModulusFit> fits;     // one per strategy that applied
  Verdict verdict;
  bool failed = false;  // the verdict stems from an error, not from a criterion
};

Analysis analyze(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder, std::uint64_t seed = 0);
Verdict classify(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder, std::uint64_t seed = 0);

// The origin when it lies on the set, then up to `count` random regular points in [-1, 1]^n.
std::vector<Vec> default_probes(const VarietySpec& spec, std::size_t count = 8, std::uint64_t seed = 0);

}  // namespace nashlab::regularity
