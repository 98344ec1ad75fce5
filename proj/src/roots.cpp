#include "nashlab/roots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nashlab::roots {

namespace {

double term_scale(const std::vector<double>& c, double s) {
  double sum = 0.0, pw = 1.0;
  for (double a : c) {
    sum += std::fabs(a) * pw;
    pw *= std::fabs(s);
  }
  return sum;
}

// Root of a polynomial that is monotone on [a, b] with p(a), p(b) of opposite sign.
double bracketed_root(const std::vector<double>& c, const std::vector<double>& dc, double a, double b) {
  double fa = horner(c, a);
  for (int it = 0; it < 4000; ++it) {
    const double m = a + (b - a) / 2;
    if (m <= a || m >= b) break;
    const double fm = horner(c, m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  double x = std::fabs(horner(c, a)) <= std::fabs(horner(c, b)) ? a : b;
  for (int it = 0; it < 3; ++it) {
    const double d = horner(dc, x);
    if (d == 0.0) break;
    const double nx = x - horner(c, x) / d;
    if (!(std::fabs(horner(c, nx)) < std::fabs(horner(c, x)))) break;
    x = nx;
  }
  return x;
}

RealRoots roots_rec(const std::vector<double>& c, double lo, double hi) {
  RealRoots out;
  if (c.size() <= 1) return out;  // nonzero constant (zero is rejected by the caller)
  const std::vector<double> dc = derivative(c);
  std::vector<double> cuts{lo};
  for (double r : roots_rec(dc, lo, hi).roots) {
    if (r > cuts.back() && r < hi) cuts.push_back(r);
  }
  cuts.push_back(hi);

  std::vector<double> vals(cuts.size());
  for (std::size_t k = 0; k < cuts.size(); ++k) vals[k] = horner(c, cuts[k]);

  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const bool interior = k > 0 && k + 1 < cuts.size();
    if (vals[k] == 0.0) {
      out.roots.push_back(cuts[k]);
      if (interior) out.degenerate = true;  // root at a critical point
      continue;
    }
    if (interior) {
      const bool touching = std::fabs(vals[k]) <= 1e-10 * term_scale(c, cuts[k]) &&
                            (vals[k - 1] < 0) == (vals[k] < 0) && (vals[k + 1] < 0) == (vals[k] < 0);
      if (touching) {
        out.roots.push_back(cuts[k]);
        out.degenerate = true;
      }
    }
    if (k + 1 < cuts.size() && vals[k + 1] != 0.0 && (vals[k] < 0) != (vals[k + 1] < 0)) {
      out.roots.push_back(bracketed_root(c, dc, cuts[k], cuts[k + 1]));
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
  return out;
}

}  // namespace

double horner(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::complex<double> horner(const std::vector<std::complex<double>>& c, std::complex<double> s) {
  std::complex<double> acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  return d;
}

template <typename T>
void trim_leading(std::vector<T>& c, double rel) {
  double mx = 0.0;
  for (const auto& a : c) mx = std::max(mx, std::abs(a));
  while (!c.empty() && std::abs(c.back()) <= rel * mx) c.pop_back();
}

template void trim_leading<double>(std::vector<double>&, double);
template void trim_leading<std::complex<double>>(std::vector<std::complex<double>>&, double);

RealRoots real_roots(const std::vector<double>& c, double lo, double hi) {
  std::vector<double> t = c;
  trim_leading(t);
  RealRoots r = roots_rec(t, lo, hi);
  // Merge roots that coincide to within rounding of the bracket.
  std::vector<double> merged;
  for (double x : r.roots) {
    if (!merged.empty() && std::fabs(x - merged.back()) <= 1e-12 * std::max(1e-300, std::fabs(x)) ) continue;
    merged.push_back(x);
  }
  r.roots = std::move(merged);
  return r;
}

std::vector<std::complex<double>> complex_roots(std::vector<std::complex<double>> c) {
  trim_leading(c);
  std::vector<std::complex<double>> out;
  if (c.size() <= 1) return out;
  const auto k = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(k, k);
  for (Eigen::Index i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) comp(i, k - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<std::complex<double>> dc;
  for (std::size_t j = 1; j < c.size(); ++j) dc.push_back(c[j] * static_cast<double>(j));
  for (Eigen::Index i = 0; i < k; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      const std::complex<double> d = horner(dc, z);
      if (d == 0.0) break;
      const std::complex<double> nz = z - horner(c, z) / d;
      if (!(std::abs(horner(c, nz)) < std::abs(horner(c, z)))) break;
      z = nz;
    }
    out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace nashlab::roots
