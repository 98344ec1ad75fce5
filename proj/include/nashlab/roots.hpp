#pragma once

#include <complex>
#include <vector>

namespace nashlab::roots {

// Coefficients are in ascending order: c[0] + c[1] s + ... + c[k] s^k.
double horner(const std::vector<double>& c, double s);
std::complex<double> horner(const std::vector<std::complex<double>>& c, std::complex<double> s);
std::vector<double> derivative(const std::vector<double>& c);

// Drops leading coefficients below rel * max|c|.
template <typename T>
void trim_leading(std::vector<T>& c, double rel = 1e-13);

struct RealRoots {
  std::vector<double> roots;  // ascending, distinct
  bool degenerate = false;    // a root of even multiplicity (touching) was met
};

// All real roots in [lo, hi]. Each critical point splits the interval into
// monotone pieces, so every piece holds at most one simple root; those are
// bracketed by bisection to full double precision and polished by Newton.
// A critical value below 1e-10 of the local term scale counts as a touching
// root and sets the degenerate flag.
RealRoots real_roots(const std::vector<double>& c, double lo, double hi);

// All complex roots: eigenvalues of the companion matrix, Newton-polished.
std::vector<std::complex<double>> complex_roots(std::vector<std::complex<double>> c);

}  // namespace nashlab::roots
