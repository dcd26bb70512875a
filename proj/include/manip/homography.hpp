#pragma once

#include <cstdint>
#include <vector>

#include "manip/se3.hpp"

namespace manip {

// Template pixel (ut, vt) observed at frame pixel (uf, vf).
struct Correspondence {
  double ut = 0.0;
  double vt = 0.0;
  double uf = 0.0;
  double vf = 0.0;
};

struct RansacParams {
  double threshold_px = 3.0;
  int max_iters = 1000;
  int min_inliers = 10;
  double confidence = 0.99;  // adaptive early-exit target
  std::uint64_t seed = 0;
};

struct RansacResult {
  Mat3 H = Mat3::Identity();            // normalized so H(2,2) = 1
  std::vector<char> inlier_mask;        // aligned with the input ordering
  int inlier_count = 0;
  int iterations = 0;
  double mean_reprojection_error = 0.0;  // px, forward transfer over inliers
};

// Normalized DLT over >= 4 correspondences (Hartley normalization), least
// squares for over-determined sets. Fails Internal on a rank-deficient system
// (all points collinear) and PointAtInfinity when H(2,2) vanishes.
Result<Mat3> fit_homography_dlt(const std::vector<Correspondence>& corr);

Result<Eigen::Vector2d> apply_homography(const Mat3& h, double u, double v);

// Consensus maximization over 4-point minimal samples with symmetric transfer
// error, then a final DLT refit on the winning inliers. Deterministic per
// seed and invariant to input permutation (sampling runs over a canonically
// sorted copy with per-iteration sub-seeds; ties keep the earliest iteration).
Result<RansacResult> estimate_homography_ransac(const std::vector<Correspondence>& corr,
                                                const RansacParams& params);

}  // namespace manip
