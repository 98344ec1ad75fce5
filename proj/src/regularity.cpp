#include "nashlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace nashlab::regularity {

namespace {

constexpr std::size_t kFitRungs = 6;
constexpr double kBilipSlope = 0.05;

// One rung of one branch, with what a pair distance needs.
struct RungPoint {
  Vec p;
  ExtReal x, y, slope;  // graphs only
  std::optional<gr::Subspace> tangent;
};

std::vector<RungPoint> rung_points(const VarietySpec& spec, const Branch& b) {
  std::vector<RungPoint> out;
  if (spec.kind == VarietyKind::ParametricGraphs) {
    const GraphFunction& g = spec.graphs.at(static_cast<std::size_t>(b.graph));
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      const ExtReal x(b.params[j]);
      out.push_back({b.points[j], x, g.h.evaluate(x), g.dh.evaluate(x), std::nullopt});
    }
    return out;
  }
  const auto tangents = nash::branch_tangents(spec, b);
  for (std::size_t j = 0; j < b.points.size(); ++j) out.push_back({b.points[j], {}, {}, {}, tangents[j]});
  return out;
}

std::optional<PairSample> make_pair(const RungPoint& a, const RungPoint& b, double scale, Strategy s) {
  PairSample ps;
  ps.p = a.p;
  ps.q = b.p;
  ps.scale = scale;
  ps.strategy = s;
  ExtReal tangent_gap;
  if (a.tangent) {
    ps.dist = ExtReal((a.p - b.p).norm());
    tangent_gap = ExtReal(gr::delta(*a.tangent, *b.tangent));
  } else {
    const ExtReal dx = a.x - b.x;
    const ExtReal dy = a.y - b.y;
    ps.dist = sqrt(dx * dx + dy * dy);
    tangent_gap = slope_delta(a.slope, b.slope);
  }
  if (ps.dist.is_zero()) return std::nullopt;
  ps.nash_dist = max(ps.dist, tangent_gap);
  return ps;
}

double log_ratio(const PairSample& s) { return s.nash_dist.log_abs() - s.dist.log_abs(); }

void require_scales(const std::vector<PairSample>& samples) {
  if (samples.size() < kFitRungs) {
    throw Error(ErrorKind::InsufficientScales, "need at least 6 pair samples, have " + std::to_string(samples.size()));
  }
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : samples) {
    lo = std::min(lo, s.dist.log10_abs());
    hi = std::max(hi, s.dist.log10_abs());
  }
  if (hi - lo < 2.0) {
    throw Error(ErrorKind::InsufficientScales, "pair distances span fewer than 2 decades");
  }
}

template <typename X, typename Y>
LinearFit fit_finest(const std::vector<PairSample>& samples, X xf, Y yf) {
  std::vector<double> x, y;
  for (const auto& s : finest_rungs(samples, kFitRungs)) {
    x.push_back(xf(s));
    y.push_back(yf(s));
  }
  return least_squares(x, y);
}

std::vector<double> dyadic_grid(double shift) {
  std::vector<double> t;
  for (int j = 0; j <= 20; ++j) t.push_back(shift * 0.1 * std::ldexp(1.0, -j));
  return t;
}

gr::Subspace graph_plane(const Mat& df) {
  const auto k = df.cols();
  Mat frame(k + df.rows(), k);
  frame.topRows(k) = Mat::Identity(k, k);
  frame.bottomRows(df.rows()) = df;
  return gr::Subspace::from_columns(frame);
}

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()[0];
}

Mat scalar(double v) { return Mat::Constant(1, 1, v); }

std::string describe(const Error& e) { return e.what(); }

bool on_set(const VarietySpec& spec, const Vec& p) {
  try {
    nash::is_regular(spec, p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool regular_at(const VarietySpec& spec, const Vec& p) {
  try {
    return nash::is_regular(spec, p);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::string_view to_string(Strategy s) {
  return s == Strategy::CrossBranch ? "cross-branch" : "within-branch";
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::SmoothBiLipschitz: return "smooth-bi-lipschitz";
    case Classification::C11Submanifold: return "C11-submanifold";
    case Classification::NotC1: return "not-C1";
    case Classification::CriterionInapplicable: return "criterion-inapplicable";
    case Classification::EtaNotInjective: return "eta-not-injective";
  }
  return "?";
}

int severity(Classification c) {
  switch (c) {
    case Classification::SmoothBiLipschitz: return 0;
    case Classification::C11Submanifold: return 1;
    case Classification::CriterionInapplicable: return 2;
    case Classification::NotC1: return 3;
    case Classification::EtaNotInjective: return 4;
  }
  return 2;
}

ExtReal slope_delta(const ExtReal& a, const ExtReal& b) {
  const ExtReal diff = abs(a - b);
  if (diff.is_zero()) return ExtReal(0.0);
  const ExtReal den = ExtReal(1.0) + a * b;
  if (diff.log_abs() > -650.0) {
    // Lines meet at the acute angle.
    const double theta = std::atan2(diff.to_double(), std::fabs(den.to_double()));
    return ExtReal(2.0 * std::sin(theta / 2.0));
  }
  // theta = diff / den to full precision; 2 sin(theta / 2) = theta here.
  return diff / abs(den);
}

std::vector<PairSample> sample_pairs(const VarietySpec& spec, const std::vector<Branch>& branches,
                                     Strategy strategy) {
  std::vector<std::vector<RungPoint>> pts;
  for (const auto& b : branches) pts.push_back(rung_points(spec, b));
  std::vector<PairSample> out;
  if (strategy == Strategy::CrossBranch) {
    std::map<int, std::vector<std::size_t>> by_side;
    for (std::size_t i = 0; i < branches.size(); ++i) by_side[branches[i].side].push_back(i);
    bool any = false;
    for (const auto& [side, idx] : by_side) {
      if (idx.size() < 2) continue;
      any = true;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
          const auto& ba = branches[idx[a]];
          const std::size_t rungs = std::min(ba.points.size(), branches[idx[b]].points.size());
          for (std::size_t j = 0; j < rungs; ++j) {
            if (auto ps = make_pair(pts[idx[a]][j], pts[idx[b]][j], ba.scales[j], strategy)) out.push_back(*ps);
          }
        }
      }
    }
    if (!any) throw Error(ErrorKind::SingleBranch, "no side carries two branches");
    return out;
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    for (std::size_t j = 0; j + 1 < pts[i].size(); ++j) {
      if (auto ps = make_pair(pts[i][j], pts[i][j + 1], branches[i].scales[j + 1], strategy)) out.push_back(*ps);
    }
  }
  if (out.empty()) throw Error(ErrorKind::InsufficientScales, "branches are too short for within-branch pairs");
  return out;
}

std::vector<PairSample> sample_pairs(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder,
                                     Strategy strategy, std::uint64_t seed) {
  const auto branches = sampler::sample_branches(spec, base, ladder, seed);
  const auto c4 = nash::compute_C4(spec, base, branches);
  if (c4.spaces.size() >= 2) {
    throw Error(ErrorKind::NotInjective, std::to_string(c4.spaces.size()) + " distinct limit tangents over the point");
  }
  return sample_pairs(spec, branches, strategy);
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InsufficientScales, "regression needs 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InsufficientScales, "regression abscissae coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  // syy is tiny for constant data; a flat line then fits perfectly.
  if (syy <= 1e-24 * std::max(1.0, my * my)) {
    f.r_squared = 1.0;
  } else {
    f.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return f;
}

std::vector<PairSample> finest_rungs(const std::vector<PairSample>& samples, std::size_t rungs) {
  std::set<double> scales;
  for (const auto& s : samples) scales.insert(s.scale);
  std::set<double> keep;
  for (double s : scales) {
    if (keep.size() == rungs) break;
    keep.insert(s);
  }
  std::vector<PairSample> out;
  for (const auto& s : samples) {
    if (keep.count(s.scale) != 0) out.push_back(s);
  }
  return out;
}

LinearFit fit_holder(const std::vector<PairSample>& samples) {
  require_scales(samples);
  LinearFit f = fit_finest(
      samples, [](const PairSample& s) { return s.dist.log_abs(); },
      [](const PairSample& s) { return s.nash_dist.log_abs(); });
  f.slope = std::clamp(f.slope, 1e-6, 1.05);
  return f;
}

LinearFit fit_loglip(const std::vector<PairSample>& samples) {
  require_scales(samples);
  for (const auto& s : samples) {
    if (s.dist >= ExtReal(0.5)) throw Error(ErrorKind::ScaleTooLarge, "a pair distance is at least 1/2");
  }
  return fit_finest(
      samples, [](const PairSample& s) { return std::log(-s.dist.log_abs()); }, log_ratio);
}

BilipResult bilip_test(const std::vector<PairSample>& samples) {
  require_scales(samples);
  BilipResult r;
  ExtReal worst(0.0);
  for (const auto& s : samples) worst = max(worst, s.nash_dist / s.dist);
  r.max_ratio = worst.to_double();
  const LinearFit vs_scale = fit_finest(samples, [](const PairSample& s) { return std::log(s.scale); }, log_ratio);
  const LinearFit vs_dist = fit_finest(samples, [](const PairSample& s) { return s.dist.log_abs(); }, log_ratio);
  r.ratio_slope = vs_scale.slope;
  r.r_squared = vs_scale.r_squared;
  r.ratio_slope_dist = vs_dist.slope;
  r.is_bilip = std::fabs(r.ratio_slope) <= kBilipSlope && std::isfinite(r.max_ratio);
  return r;
}

ModulusFit fit_modulus(const std::vector<PairSample>& samples, Strategy strategy) {
  ModulusFit m;
  m.strategy = strategy;
  m.sample_count = samples.size();
  const LinearFit a = fit_holder(samples);
  m.alpha_hat = a.slope;
  m.alpha_r2 = a.r_squared;
  m.alpha_intercept = a.intercept;
  try {
    const LinearFit g = fit_loglip(samples);
    m.gamma_hat = g.slope;
    m.gamma_r2 = g.r_squared;
  } catch (const Error& e) {
    m.notes.push_back("log-Lipschitz fit skipped: " + describe(e));
  }
  const BilipResult b = bilip_test(samples);
  m.max_ratio = b.max_ratio;
  m.ratio_slope = b.ratio_slope;
  m.ratio_slope_dist = b.ratio_slope_dist;
  m.ratio_r2 = b.r_squared;
  m.is_bilip = b.is_bilip;
  return m;
}

GammaCheck loglip_boundedness(const std::vector<PairSample>& samples, double gamma) {
  // Largest log v per rung.
  std::map<double, double, std::greater<>> per_rung;
  for (const auto& s : samples) {
    const double lv = log_ratio(s) - gamma * std::log(-s.dist.log_abs());
    auto [it, fresh] = per_rung.emplace(s.scale, lv);
    if (!fresh) it->second = std::max(it->second, lv);
  }
  if (per_rung.size() < 3) throw Error(ErrorKind::InsufficientScales, "boundedness check needs 3 rungs");
  GammaCheck g;
  g.gamma = gamma;
  for (const auto& [scale, lv] : per_rung) {
    g.scales.push_back(scale);
    g.values.push_back(std::exp(lv));
  }
  const double first = g.values.front();
  const double top = *std::max_element(g.values.begin(), g.values.end());
  g.growth = g.values.back() / first;
  g.bounded = top <= 3.0 * first;
  bool increasing = true;
  for (std::size_t j = g.values.size() / 2 + 1; j < g.values.size(); ++j) {
    increasing = increasing && g.values[j] > g.values[j - 1];
  }
  g.divergent = g.growth > 10.0 && increasing;
  return g;
}

double inequality_constant(double lambda) {
  return std::sqrt(2.0) / (2.0 * lambda * std::sqrt(1.0 + lambda * lambda));
}

double tangent_derivative_margin(const Mat& dfi, const Mat& dfj, double lambda) {
  if (!(lambda >= 1.0)) throw Error(ErrorKind::InputError, "lambda must be at least 1");
  if (dfi.rows() != dfj.rows() || dfi.cols() != dfj.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "derivatives differ in shape");
  }
  const double slack = 1.0 + 1e-12;
  if (op_norm(dfi) > lambda * slack || op_norm(dfj) > lambda * slack) {
    throw Error(ErrorKind::DerivativeBoundViolated, "derivative norm exceeds lambda");
  }
  return gr::delta(graph_plane(dfi), graph_plane(dfj)) - inequality_constant(lambda) * op_norm(dfi - dfj);
}

InequalityReport check_tangent_derivative_inequality(const GraphFunction& fi, const GraphFunction& fj,
                                                     double lambda, const std::vector<double>& xs) {
  InequalityReport r;
  r.min_margin = INFINITY;
  for (double x : xs) {
    const double m = tangent_derivative_margin(scalar(fi.dh.evaluate(x)), scalar(fj.dh.evaluate(x)), lambda);
    ++r.trials;
    if (m < r.min_margin) {
      r.min_margin = m;
      r.worst_point = Vec::Constant(1, x);
    }
  }
  return r;
}

InequalityReport random_quadratic_trials(std::size_t trials, double lambda, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
  // Symmetric A with |a_kl| <= 0.9 and |b_k| <= 0.9 keep |A z + b| < 3.82 on the square.
  std::uniform_real_distribution<double> coef(-0.9, 0.9);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto derivative = [&](const Vec& z) {
    Mat a(2, 2);
    a(0, 0) = coef(rng);
    a(1, 1) = coef(rng);
    a(0, 1) = a(1, 0) = coef(rng);
    const Vec b = (Vec(2) << coef(rng), coef(rng)).finished();
    return Mat((a * z + b).transpose());
  };
  InequalityReport r;
  r.min_margin = INFINITY;
  for (std::size_t k = 0; k < trials; ++k) {
    const Vec z = (Vec(2) << unit(rng), unit(rng)).finished();
    const Mat di = derivative(z);
    const Mat dj = derivative(z);
    const double m = tangent_derivative_margin(di, dj, lambda);
    ++r.trials;
    if (m < r.min_margin) {
      r.min_margin = m;
      r.worst_point = z;
    }
  }
  return r;
}

LemmaReport verify_lemma_ratio(const poly::Expr& g) {
  const poly::Expr dg = g.derivative();
  for (double shift : {1.0, 0.97}) {
    LemmaReport r;
    r.t = dyadic_grid(shift);
    bool vanished = false;
    for (double t : r.t) {
      const ExtReal d = dg.evaluate(ExtReal(t));
      if (d.is_zero()) {
        vanished = true;
        break;
      }
      r.values.push_back(g.evaluate(ExtReal(t)) / d);
    }
    if (vanished) continue;
    r.tail = r.values.back();
    r.monotone = true;
    for (std::size_t j = 1; j < r.values.size(); ++j) r.monotone = r.monotone && abs(r.values[j]) < abs(r.values[j - 1]);
    r.limit_ok = abs(r.tail) < ExtReal(1e-6);
    return r;
  }
  throw Error(ErrorKind::DerivativeVanishes, "g' vanishes on the sampling grid");
}

LemmaReport verify_lemma_loglip(const poly::Expr& g) {
  const poly::Expr dg = g.derivative();
  LemmaReport r;
  r.t = dyadic_grid(1.0);
  for (double t : r.t) {
    const ExtReal gv = g.evaluate(ExtReal(t));
    if (!(gv > ExtReal(0.0) && gv < ExtReal(1.0))) {
      throw Error(ErrorKind::DomainViolation, "g must lie in (0, 1) on the grid; t = " + std::to_string(t));
    }
    r.values.push_back(dg.evaluate(ExtReal(t)) / gv / ExtReal(gv.log_abs()));
  }
  r.tail = r.values.back();
  r.monotone = true;
  for (std::size_t j = 1; j < r.values.size(); ++j) r.monotone = r.monotone && abs(r.values[j]) > abs(r.values[j - 1]);
  r.limit_ok = r.tail < ExtReal(-1e3);
  return r;
}

Analysis analyze(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder, std::uint64_t seed) {
  Analysis a;
  a.base = base;
  Verdict& v = a.verdict;
  auto inapplicable = [&](const std::string& why) {
    a.failed = true;
    v.classification = Classification::CriterionInapplicable;
    v.evidence.push_back({"analysis", "error", 1.0, 0.0});
    v.notes.push_back(why);
    return a;
  };
  try {
    a.branches = sampler::sample_branches(spec, base, ladder, seed);
    a.branch_count = sampler::branch_count(a.branches);
  } catch (const Error& e) {
    return inapplicable(describe(e));
  }
  if (spec.kind == VarietyKind::ImplicitReal && spec.ambient_dim == 2) {
    try {
      const auto proj = sampler::choose_projection(spec, base, seed);
      a.parity = sampler::multiplicity_mod2(spec, base, proj.direction, proj.cone, seed).parity;
    } catch (const Error& e) {
      v.notes.push_back("multiplicity parity unavailable: " + describe(e));
    }
  }
  try {
    a.cones = nash::coincide_linearly(spec, base, a.branches);
  } catch (const Error& e) {
    return inapplicable(describe(e));
  }
  for (Strategy s : {Strategy::CrossBranch, Strategy::WithinBranch}) {
    try {
      auto samples = sample_pairs(spec, a.branches, s);
      a.fits.push_back(fit_modulus(samples, s));
      a.samples.insert(a.samples.end(), samples.begin(), samples.end());
    } catch (const Error& e) {
      v.notes.push_back(std::string(to_string(s)) + " pairs unavailable: " + describe(e));
    }
  }

  const auto& cones = *a.cones;
  if (cones.c4_spaces.size() >= 2) {
    v.classification = Classification::EtaNotInjective;
    v.evidence.push_back({"injectivity", "distinct limit tangents", static_cast<double>(cones.c4_spaces.size()), 1.0});
    v.notes.emplace_back("not-C1: several limit tangents over one point");
    return a;
  }
  if (a.fits.empty()) return inapplicable("no pair strategy applies at this point");

  bool bilip = true;
  double alpha = INFINITY;
  double worst_slope = 0.0;
  for (const auto& f : a.fits) {
    bilip = bilip && f.is_bilip;
    alpha = std::min(alpha, f.alpha_hat);
    if (std::fabs(f.ratio_slope) > std::fabs(worst_slope)) worst_slope = f.ratio_slope;
  }
  const Evidence bilip_ev{"bi-lipschitz", "|ratio slope|", std::fabs(worst_slope), kBilipSlope};

  if (!cones.coincide_linearly) {
    v.classification = Classification::CriterionInapplicable;
    if (cones.c3_is_linear) {
      v.evidence.push_back(
          {"coincide-linearly", "delta(span C3, C4)", gr::delta(*cones.c3_span, cones.c4_spaces.front()), 0.05});
    } else {
      v.evidence.push_back({"coincide-linearly", "C3 closed under antipody", 0.0, 1.0});
    }
    v.notes.emplace_back("not-C1: the secant cone is not the limit tangent space");
    if (!bilip) {
      v.evidence.push_back(bilip_ev);
      v.notes.emplace_back("not-C1 evidence: nash_dist / dist is unbounded");
    }
    if (spec.kind == VarietyKind::Region) v.notes.emplace_back("eta may still be a smooth diffeomorphism");
    return a;
  }
  v.evidence.push_back({"coincide-linearly", "C4 clusters", static_cast<double>(cones.c4_spaces.size()), 1.0});
  v.evidence.push_back(bilip_ev);
  if (bilip) {
    v.classification = spec.kind == VarietyKind::ImplicitComplex ? Classification::SmoothBiLipschitz
                                                                  : Classification::C11Submanifold;
    return a;
  }
  v.classification = Classification::NotC1;
  if (alpha < 1.0) {
    v.evidence.push_back({"holder-exponent", "alpha_hat (fitted)", alpha, 1.0});
  } else {
    v.notes.emplace_back("fitted Hoelder exponent reaches 1 while nash_dist / dist is unbounded");
  }
  return a;
}

Verdict classify(const VarietySpec& spec, const Vec& base, const ScaleLadder& ladder, std::uint64_t seed) {
  return analyze(spec, base, ladder, seed).verdict;
}

std::vector<Vec> default_probes(const VarietySpec& spec, std::size_t count, std::uint64_t seed) {
  std::vector<Vec> out;
  const auto n = static_cast<Eigen::Index>(spec.ambient_dim);
  if (on_set(spec, Vec::Zero(n))) out.push_back(Vec::Zero(n));
  std::mt19937_64 rng(seed ^ 0x94d049bb133111ebULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Vec ex = (Vec(2) << 1.0, 0.0).finished();
  const Vec ey = (Vec(2) << 0.0, 1.0).finished();
  std::size_t found = 0;
  for (int attempt = 0; attempt < 400 && found < count; ++attempt) {
    std::vector<Vec> candidates;
    try {
      switch (spec.kind) {
        case VarietyKind::ImplicitReal:
          if (spec.ambient_dim == 2) {
            candidates = sampler::fiber_points(spec, attempt % 2 == 0 ? ey : ex, unit(rng), 1.0).points;
          }
          break;
        case VarietyKind::ImplicitComplex:
          candidates = sampler::complex_fiber_points(spec, ey, std::complex<double>(unit(rng), unit(rng)), 1.0,
                                                     Vec::Zero(4));
          break;
        case VarietyKind::ParametricGraphs: {
          const auto& g = spec.graphs[rng() % spec.graphs.size()];
          const double x = g.lo + (g.hi - g.lo) * (0.5 + 0.5 * unit(rng));
          candidates.push_back((Vec(2) << x, g.h.evaluate(x)).finished());
          break;
        }
        case VarietyKind::Region: {
          Vec p(n);
          for (Eigen::Index i = 0; i < n; ++i) p[i] = unit(rng);
          if (spec.equation.evaluate(std::span<const double>(p.data(), p.size())) < 0.0) candidates.push_back(p);
          break;
        }
      }
    } catch (const Error&) {
      continue;
    }
    if (spec.kind == VarietyKind::ImplicitReal && spec.ambient_dim != 2) break;
    for (const auto& c : candidates) {
      if (found < count && c.cwiseAbs().maxCoeff() <= 1.0 && regular_at(spec, c)) {
        out.push_back(c);
        ++found;
        break;
      }
    }
  }
  return out;
}

}  // namespace nashlab::regularity
