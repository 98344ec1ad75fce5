#include "nashlab/grassmannian.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>

namespace nashlab::gr {

namespace {

void check_same_shape(const Subspace& a, const Subspace& b) {
  if (a.n() != b.n() || a.d() != b.d()) {
    throw Error(ErrorKind::DimensionMismatch,
                "subspaces live in Gr(" + std::to_string(a.d()) + "," + std::to_string(a.n()) + ") and Gr(" +
                    std::to_string(b.d()) + "," + std::to_string(b.n()) + ")");
  }
}

// Distance from a unit vector a to the unit sphere of b, by direct projection.
double sphere_distance(const Vec& a, const Mat& b_frame) {
  const Vec proj = b_frame * (b_frame.transpose() * a);
  const double norm = proj.norm();
  if (norm == 0.0) return std::sqrt(2.0);  // every point of the sphere is equidistant
  return (a - proj / norm).norm();
}

double one_sided_oracle(const Subspace& a, const Subspace& b, std::size_t samples, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const std::size_t d = a.d();
  auto point_of = [&](const Vec& g) -> Vec { return a.frame() * g.normalized(); };

  Vec best_g(d);
  double best = -1.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec g(d);
    for (std::size_t k = 0; k < d; ++k) g[k] = gauss(rng);
    if (g.norm() == 0.0) continue;
    const double v = sphere_distance(point_of(g), b.frame());
    if (v > best) {
      best = v;
      best_g = g.normalized();
    }
  }
  // Local random search around the best sample with a shrinking step.
  double step = 0.5;
  int failures = 0;
  while (step > 1e-9) {
    Vec g = best_g;
    for (std::size_t k = 0; k < d; ++k) g[k] += step * gauss(rng);
    if (g.norm() > 0.0) {
      const double v = sphere_distance(point_of(g), b.frame());
      if (v > best) {
        best = v;
        best_g = g.normalized();
        failures = 0;
        continue;
      }
    }
    if (++failures >= 20) {
      step *= 0.5;
      failures = 0;
    }
  }
  return best;
}

}  // namespace

Subspace Subspace::from_spanning(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw Error(ErrorKind::RankDeficient, "no spanning vectors");
  const auto n = vectors.front().size();
  Mat m(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != n) throw Error(ErrorKind::DimensionMismatch, "spanning vectors differ in length");
    m.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  return from_columns(m);
}

Subspace Subspace::from_columns(const Mat& columns) {
  const auto n = columns.rows();
  const auto d = columns.cols();
  if (d == 0 || d > n) throw Error(ErrorKind::RankDeficient, "need 1 <= d <= n spanning vectors");
  const Eigen::JacobiSVD<Mat> svd(columns);
  const auto& sv = svd.singularValues();
  if (!(sv[d - 1] > 1e-9 * sv[0])) {
    throw Error(ErrorKind::RankDeficient, "spanning vectors are linearly dependent");
  }
  Mat q = columns;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    q.col(j).normalize();
  }
  return Subspace(std::move(q));
}

Subspace Subspace::full(std::size_t n) {
  return Subspace(Mat::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t d) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(d);
  for (std::size_t k = 0; k < d; ++k) cur[k] = k;
  if (d > n) return out;
  for (;;) {
    out.push_back(cur);
    std::size_t k = d;
    while (k > 0 && cur[k - 1] == n - d + k - 1) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t j = k; j < d; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  check_same_shape(a, b);
  const std::size_t d = a.d();
  // Cosines from the frame product, sines from the residual of b off a.
  // Small angles come from the sines, where arccos loses half the digits.
  const Mat c = a.frame().transpose() * b.frame();
  Eigen::VectorXd cos_sv = Eigen::JacobiSVD<Mat>(c).singularValues();  // descending
  const Mat r = b.frame() - a.frame() * c;
  Eigen::VectorXd sin_sv = Eigen::JacobiSVD<Mat>(r).singularValues();  // descending
  std::vector<double> sines(sin_sv.data(), sin_sv.data() + sin_sv.size());
  sines.resize(d, 0.0);
  std::sort(sines.begin(), sines.end());

  std::vector<double> angles(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double cs = std::clamp(cos_sv[static_cast<Eigen::Index>(k)], 0.0, 1.0);
    const double sn = std::clamp(sines[k], 0.0, 1.0);
    angles[k] = sn * sn < 0.5 ? std::asin(sn) : std::acos(cs);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

double delta(const Subspace& a, const Subspace& b) {
  check_same_shape(a, b);
  // Fixed operand order makes the result bitwise symmetric.
  const Mat& fa = a.frame();
  const Mat& fb = b.frame();
  const bool swap = std::lexicographical_compare(fb.data(), fb.data() + fb.size(), fa.data(), fa.data() + fa.size());
  const auto angles = swap ? principal_angles(b, a) : principal_angles(a, b);
  return 2.0 * std::sin(angles.back() / 2.0);
}

double delta_X(const NashPoint& p, const NashPoint& q) {
  if (p.point.size() != q.point.size()) throw Error(ErrorKind::DimensionMismatch, "points differ in length");
  return std::max((p.point - q.point).norm(), delta(p.tangent, q.tangent));
}

PlueckerCoords pluecker(const Subspace& a) {
  const auto subsets = index_subsets(a.n(), a.d());
  Vec coords(static_cast<Eigen::Index>(subsets.size()));
  const auto d = static_cast<Eigen::Index>(a.d());
  Mat minor(d, d);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (Eigen::Index r = 0; r < d; ++r) minor.row(r) = a.frame().row(static_cast<Eigen::Index>(subsets[s][r]));
    coords[static_cast<Eigen::Index>(s)] = minor.determinant();
  }
  coords.normalize();
  for (Eigen::Index k = 0; k < coords.size(); ++k) {
    if (std::fabs(coords[k]) > 1e-9) {
      if (coords[k] < 0) coords = -coords;
      break;
    }
  }
  return {coords};
}

Subspace from_pluecker(const Vec& omega, std::size_t n, std::size_t d) {
  if (d == n) return Subspace::full(n);
  const auto small = index_subsets(n, d);
  const auto big = index_subsets(n, d + 1);
  if (static_cast<std::size_t>(omega.size()) != small.size()) {
    throw Error(ErrorKind::DimensionMismatch, "Pluecker vector length differs from C(n,d)");
  }
  std::map<std::vector<std::size_t>, Eigen::Index> big_index;
  for (std::size_t k = 0; k < big.size(); ++k) big_index[big[k]] = static_cast<Eigen::Index>(k);

  // Column i of the wedge map is e_i ^ omega.
  Mat wedge = Mat::Zero(static_cast<Eigen::Index>(big.size()), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < small.size(); ++s) {
    const double w = omega[static_cast<Eigen::Index>(s)];
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(small[s].begin(), small[s].end(), i) != small[s].end()) continue;
      std::vector<std::size_t> merged = small[s];
      const auto pos = std::lower_bound(merged.begin(), merged.end(), i);
      const auto before = pos - merged.begin();
      merged.insert(pos, i);
      const double sign = (before % 2 == 0) ? 1.0 : -1.0;
      wedge(big_index.at(merged), static_cast<Eigen::Index>(i)) += sign * w;
    }
  }
  const Eigen::JacobiSVD<Mat> svd(wedge, Eigen::ComputeFullV);
  const Mat& v = svd.matrixV();
  // Singular values come in descending order; the kernel is the last d columns.
  return Subspace::from_columns(v.rightCols(static_cast<Eigen::Index>(d)));
}

double hausdorff_delta_oracle(const Subspace& a, const Subspace& b, std::size_t samples, std::uint64_t seed) {
  check_same_shape(a, b);
  if (samples < 100) throw Error(ErrorKind::InputError, "oracle needs at least 100 samples");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const double ab = one_sided_oracle(a, b, samples, rng);
  const double ba = one_sided_oracle(b, a, samples, rng);
  return std::max(ab, ba);
}

Subspace random_subspace(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = gauss(rng);
    }
    try {
      return Subspace::from_columns(m);
    } catch (const Error&) {
      // Probability zero; draw again.
    }
  }
}

}  // namespace nashlab::gr
