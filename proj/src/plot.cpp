#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nashlab/cli.hpp"

namespace nashlab::cli {

namespace {

constexpr double kPanel = 360.0;
constexpr double kMargin = 50.0;

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Box {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;

  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  void pad() {
    if (!(x1 > x0)) x0 -= 1, x1 += 1;
    if (!(y1 > y0)) y0 -= 1, y1 += 1;
    const double px = 0.05 * (x1 - x0), py = 0.05 * (y1 - y0);
    x0 -= px, x1 += px, y0 -= py, y1 += py;
  }
};

// Maps data coordinates into a panel whose top-left corner is (ox, oy).
struct Frame {
  Box box;
  double ox, oy;
  double sx(double x) const { return ox + (x - box.x0) / (box.x1 - box.x0) * kPanel; }
  double sy(double y) const { return oy + kPanel - (y - box.y0) / (box.y1 - box.y0) * kPanel; }
};

void axes(std::ostringstream& out, const Frame& f, const std::string& title, const std::string& xl,
          const std::string& yl, int digits) {
  out << "<rect x=\"" << fmt(f.ox) << "\" y=\"" << fmt(f.oy) << "\" width=\"" << fmt(kPanel) << "\" height=\""
      << fmt(kPanel) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << fmt(f.ox + kPanel / 2) << "\" y=\"" << fmt(f.oy - 12)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<text x=\"" << fmt(f.ox + kPanel / 2) << "\" y=\"" << fmt(f.oy + kPanel + 34)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xl << "</text>\n";
  out << "<text x=\"" << fmt(f.ox - 36) << "\" y=\"" << fmt(f.oy + kPanel / 2) << "\" text-anchor=\"middle\" "
      << "font-size=\"12\" transform=\"rotate(-90 " << fmt(f.ox - 36) << " " << fmt(f.oy + kPanel / 2) << ")\">" << yl
      << "</text>\n";
  const auto label = [&](double x, double y, double v, const char* anchor) {
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\"" << anchor
        << "\" font-size=\"10\">" << fmt(v, digits) << "</text>\n";
  };
  label(f.ox, f.oy + kPanel + 14, f.box.x0, "start");
  label(f.ox + kPanel, f.oy + kPanel + 14, f.box.x1, "end");
  label(f.ox - 4, f.oy + kPanel, f.box.y0, "end");
  label(f.ox - 4, f.oy + 10, f.box.y1, "end");
}

void dot(std::ostringstream& out, const Frame& f, double x, double y, const char* color, double r = 1.6) {
  out << "<circle cx=\"" << fmt(f.sx(x)) << "\" cy=\"" << fmt(f.sy(y)) << "\" r=\"" << fmt(r, 1) << "\" fill=\""
      << color << "\"/>\n";
}

std::vector<Vec> real_trace(const VarietySpec& spec, const Vec& base) {
  std::vector<Vec> pts;
  const Vec ex = (Vec(2) << 1.0, 0.0).finished();
  const Vec ey = (Vec(2) << 0.0, 1.0).finished();
  for (const Vec& dir : {ex, ey}) {
    for (int k = 0; k <= 400; ++k) {
      const double v = -1.0 + k / 200.0;
      try {
        for (const auto& p : sampler::fiber_points(spec, dir, v, 1.0, base).points) pts.push_back(p);
      } catch (const Error&) {
        // Degenerate fibers simply leave a gap.
      }
    }
  }
  return pts;
}

// Points drawn in the left panel, in the plane of the first two coordinates.
std::vector<Vec> set_points(const VarietySpec& spec, const Vec& base) {
  std::vector<Vec> pts;
  switch (spec.kind) {
    case VarietyKind::ParametricGraphs:
      for (const auto& g : spec.graphs) {
        for (int k = 0; k <= 300; ++k) {
          const double x = g.lo + (g.hi - g.lo) * k / 300.0;
          pts.push_back((Vec(2) << x, g.h.evaluate(x)).finished());
        }
      }
      break;
    case VarietyKind::ImplicitReal:
      if (spec.ambient_dim == 2) pts = real_trace(spec, base);
      break;
    case VarietyKind::ImplicitComplex: {
      const VarietySpec real = VarietySpec::implicit_real(spec.equation_text, spec.variables);
      pts = real_trace(real, base.head(2));
      break;
    }
    case VarietyKind::Region:
      if (spec.ambient_dim != 2) break;
      for (int i = 0; i <= 60; ++i) {
        for (int j = 0; j <= 60; ++j) {
          const Vec p = base + (Vec(2) << -1.0 + i / 30.0, -1.0 + j / 30.0).finished();
          if (spec.equation.evaluate(std::span<const double>(p.data(), 2)) <= 0.0) pts.push_back(p);
        }
      }
      break;
  }
  return pts;
}

}  // namespace

std::string render_svg(const VarietySpec& spec, const regularity::Analysis& a) {
  if (a.samples.size() < 6 || a.fits.empty()) {
    throw Error(ErrorKind::InsufficientScales, "plot needs at least 6 pair samples");
  }
  std::ostringstream out;
  const double width = 2 * kPanel + 3 * kMargin + 20;
  const double height = kPanel + 2 * kMargin + 20;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width, 0) << "\" height=\"" << fmt(height, 0)
      << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Left: the set.
  const std::vector<Vec> pts = set_points(spec, a.base);
  Frame left{{}, kMargin, kMargin};
  for (const auto& p : pts) left.box.add(p[0], p[1]);
  left.box.add(a.base[0], a.base[1]);
  left.box.pad();
  const std::string set_title = spec.kind == VarietyKind::ImplicitComplex ? "real trace of the set" : "the set";
  axes(out, left, set_title, spec.variables.at(0), spec.variables.size() > 1 ? spec.variables[1] : "y", 2);
  for (const auto& p : pts) dot(out, left, p[0], p[1], "#1f5fa8", 1.2);
  dot(out, left, a.base[0], a.base[1], "#c0392b", 3.5);

  // Right: log-log pair scatter and the fit with the smallest exponent.
  const regularity::ModulusFit* fit = &a.fits.front();
  for (const auto& f : a.fits) {
    if (f.alpha_hat < fit->alpha_hat) fit = &f;
  }
  Frame right{{}, 2 * kMargin + kPanel + 20, kMargin};
  for (const auto& s : a.samples) right.box.add(s.dist.log10_abs(), s.nash_dist.log10_abs());
  right.box.pad();
  axes(out, right, "pair moduli", "log10 dist", "log10 nash_dist", 1);
  for (const auto& s : a.samples) {
    const char* color = s.strategy == regularity::Strategy::CrossBranch ? "#1f5fa8" : "#27ae60";
    dot(out, right, s.dist.log10_abs(), s.nash_dist.log10_abs(), color, 2.5);
  }
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : a.samples) {
    if (s.strategy != fit->strategy) continue;
    lo = std::min(lo, s.dist.log10_abs());
    hi = std::max(hi, s.dist.log10_abs());
  }
  const double b10 = fit->alpha_intercept / std::log(10.0);
  const auto line_y = [&](double x) { return std::clamp(fit->alpha_hat * x + b10, right.box.y0, right.box.y1); };
  out << "<line x1=\"" << fmt(right.sx(lo)) << "\" y1=\"" << fmt(right.sy(line_y(lo))) << "\" x2=\""
      << fmt(right.sx(hi)) << "\" y2=\"" << fmt(right.sy(line_y(hi)))
      << "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
  out << "<text x=\"" << fmt(right.ox + 12) << "\" y=\"" << fmt(right.oy + 22) << "\" font-size=\"14\">"
      << "α̂ = " << fmt(fit->alpha_hat) << " (" << regularity::to_string(fit->strategy) << ")</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace nashlab::cli
