#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "nashlab/error.hpp"

namespace nashlab::gr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A point of Gr(d, n): a d-dimensional linear subspace of R^n, held as an
// n x d matrix with orthonormal columns.
class Subspace {
 public:
  // Orthonormalizes the given vectors (modified Gram-Schmidt, two passes).
  // Throws RankDeficient when the smallest singular value of the stacked
  // vectors is at most 1e-9 times the largest.
  static Subspace from_spanning(const std::vector<Vec>& vectors);
  static Subspace from_columns(const Mat& columns);
  static Subspace full(std::size_t n);

  std::size_t n() const { return static_cast<std::size_t>(frame_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(frame_.cols()); }
  const Mat& frame() const { return frame_; }
  Mat projector() const { return frame_ * frame_.transpose(); }

 private:
  explicit Subspace(Mat frame) : frame_(std::move(frame)) {}
  Mat frame_;
};

struct NashPoint {
  Vec point;
  Subspace tangent;
};

// Unit vector of all d x d minors of the frame, column subsets in
// lexicographic order, first entry with magnitude above 1e-9 made positive.
struct PlueckerCoords {
  Vec coords;
};

// Sorted row subsets of size d of {0, ..., n-1}, lexicographic order.
std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t d);

// Nondecreasing principal angles in [0, pi/2].
std::vector<double> principal_angles(const Subspace& a, const Subspace& b);

// Hausdorff distance of the unit spheres of a and b: 2 sin(theta_max / 2).
double delta(const Subspace& a, const Subspace& b);

// max(|x1 - x2|, delta(L1, L2)).
double delta_X(const NashPoint& p, const NashPoint& q);

PlueckerCoords pluecker(const Subspace& a);

// Nearest decomposable subspace to an approximate Pluecker vector: the
// d-dimensional near-kernel of v -> v ^ omega.
Subspace from_pluecker(const Vec& omega, std::size_t n, std::size_t d);

// Brute-force sphere Hausdorff distance by random sampling plus local
// refinement. Fixed internal seed; approaches delta(a, b) from below.
double hausdorff_delta_oracle(const Subspace& a, const Subspace& b, std::size_t samples,
                              std::uint64_t seed = 0);

// Haar-distributed random subspace.
Subspace random_subspace(std::size_t n, std::size_t d, std::mt19937_64& rng);

}  // namespace nashlab::gr
