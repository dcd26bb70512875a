#include "manip/homography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "manip/rng.hpp"

namespace manip {

namespace {

struct Normalization {
  Mat3 T = Mat3::Identity();
};

// Hartley normalization: centroid to origin, mean distance sqrt(2).
bool normalize_points(const std::vector<Eigen::Vector2d>& pts, Normalization* out) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (mean_dist < 1e-12) return false;
  double s = std::sqrt(2.0) / mean_dist;
  out->T << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return true;
}

double triangle_area2(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                      const Eigen::Vector2d& c) {
  return std::abs((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

bool has_collinear_triple(const Eigen::Vector2d* pts) {
  for (int skip = 0; skip < 4; ++skip) {
    Eigen::Vector2d tri[3];
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) tri[k++] = pts[i];
    }
    if (triangle_area2(tri[0], tri[1], tri[2]) < 1e-8) return true;
  }
  return false;
}

}  // namespace

Result<Mat3> fit_homography_dlt(const std::vector<Correspondence>& corr) {
  const int n = static_cast<int>(corr.size());
  if (n < 4) {
    return Result<Mat3>::failure(Status::TooFewCorrespondences,
                                 "homography needs at least 4 correspondences");
  }
  std::vector<Eigen::Vector2d> src(n), dst(n);
  for (int i = 0; i < n; ++i) {
    src[i] = {corr[i].ut, corr[i].vt};
    dst[i] = {corr[i].uf, corr[i].vf};
  }
  Normalization ns, nd;
  if (!normalize_points(src, &ns) || !normalize_points(dst, &nd)) {
    return Result<Mat3>::failure(Status::Internal, "coincident points in homography fit");
  }

  Eigen::MatrixXd a(2 * n, 9);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d s = ns.T * Eigen::Vector3d(src[i].x(), src[i].y(), 1.0);
    Eigen::Vector3d d = nd.T * Eigen::Vector3d(dst[i].x(), dst[i].y(), 1.0);
    double x = s.x(), y = s.y(), xp = d.x(), yp = d.y();
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, x * xp, y * xp, xp;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, x * yp, y * yp, yp;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  // Collinear input leaves a null space of dimension >= 2; the returned
  // direction is then an arbitrary mix, so reject on the second-smallest
  // singular value rather than trusting the recovered matrix.
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(7) < 1e-9 * sv(0)) {
    return Result<Mat3>::failure(Status::Internal, "rank-deficient homography system");
  }
  Eigen::VectorXd h = svd.matrixV().col(8);
  Mat3 hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Mat3 out = nd.T.inverse() * hn * ns.T;
  if (std::abs(out(2, 2)) < 1e-12) {
    return Result<Mat3>::failure(Status::Internal, "homography scale vanishes");
  }
  out /= out(2, 2);
  if (std::abs(out.determinant()) < 1e-12) {
    return Result<Mat3>::failure(Status::Internal, "homography is singular");
  }
  return Result<Mat3>::success(out);
}

Result<Eigen::Vector2d> apply_homography(const Mat3& h, double u, double v) {
  double w = h(2, 0) * u + h(2, 1) * v + h(2, 2);
  if (std::abs(w) <= 1e-12) {
    return Result<Eigen::Vector2d>::failure(Status::PointAtInfinity,
                                            "point maps to the line at infinity");
  }
  return Result<Eigen::Vector2d>::success(Eigen::Vector2d(
      (h(0, 0) * u + h(0, 1) * v + h(0, 2)) / w, (h(1, 0) * u + h(1, 1) * v + h(1, 2)) / w));
}

namespace {

// Symmetric transfer error; infinity when either direction degenerates.
double symmetric_error(const Mat3& h, const Mat3& h_inv, const Correspondence& c) {
  auto fwd = apply_homography(h, c.ut, c.vt);
  auto bwd = apply_homography(h_inv, c.uf, c.vf);
  if (!fwd || !bwd) return std::numeric_limits<double>::infinity();
  double dfx = fwd->x() - c.uf, dfy = fwd->y() - c.vf;
  double dbx = bwd->x() - c.ut, dby = bwd->y() - c.vt;
  return dfx * dfx + dfy * dfy + dbx * dbx + dby * dby;
}

struct ScoredModel {
  Mat3 h;
  std::vector<char> mask;
  int count = 0;
  bool valid = false;
};

ScoredModel score_model(const Mat3& h, const std::vector<Correspondence>& corr,
                        double err_limit) {
  ScoredModel m;
  if (std::abs(h.determinant()) < 1e-12) return m;
  Mat3 h_inv = h.inverse();
  m.h = h;
  m.mask.assign(corr.size(), 0);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    if (symmetric_error(h, h_inv, corr[i]) < err_limit) {
      m.mask[i] = 1;
      ++m.count;
    }
  }
  m.valid = true;
  return m;
}

}  // namespace

Result<RansacResult> estimate_homography_ransac(const std::vector<Correspondence>& corr,
                                                const RansacParams& params) {
  const int n = static_cast<int>(corr.size());
  if (n < 4) {
    return Result<RansacResult>::failure(Status::TooFewCorrespondences,
                                         "RANSAC needs at least 4 correspondences");
  }

  // Canonical ordering makes sampling independent of the caller's ordering.
  std::vector<int> canon(n);
  std::iota(canon.begin(), canon.end(), 0);
  std::sort(canon.begin(), canon.end(), [&](int a, int b) {
    const Correspondence &ca = corr[a], &cb = corr[b];
    if (ca.ut != cb.ut) return ca.ut < cb.ut;
    if (ca.vt != cb.vt) return ca.vt < cb.vt;
    if (ca.uf != cb.uf) return ca.uf < cb.uf;
    return ca.vf != cb.vf ? ca.vf < cb.vf : a < b;
  });
  std::vector<Correspondence> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = corr[canon[i]];

  const double err_limit = 2.0 * params.threshold_px * params.threshold_px;
  ScoredModel best;
  int iterations = 0;
  int effective_max = params.max_iters;

  for (int iter = 0; iter < effective_max; ++iter) {
    iterations = iter + 1;
    Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(iter)));

    int pick[4];
    for (int k = 0; k < 4; ++k) {
      bool fresh = false;
      while (!fresh) {
        pick[k] = static_cast<int>(rng.index(n));
        fresh = true;
        for (int j = 0; j < k; ++j) fresh = fresh && pick[j] != pick[k];
      }
    }
    Eigen::Vector2d src_q[4], dst_q[4];
    std::vector<Correspondence> sample(4);
    for (int k = 0; k < 4; ++k) {
      sample[k] = sorted[pick[k]];
      src_q[k] = {sample[k].ut, sample[k].vt};
      dst_q[k] = {sample[k].uf, sample[k].vf};
    }
    if (has_collinear_triple(src_q) || has_collinear_triple(dst_q)) continue;

    auto h = fit_homography_dlt(sample);
    if (!h) continue;
    ScoredModel model = score_model(*h, sorted, err_limit);
    if (!model.valid || model.count <= best.count) continue;
    best = model;

    // 99%-confidence iteration bound from the current inlier ratio.
    double w = static_cast<double>(best.count) / n;
    if (w >= 1.0) {
      effective_max = iterations;
    } else {
      double denom = std::log(1.0 - w * w * w * w);
      if (denom < 0.0) {
        double needed = std::ceil(std::log(1.0 - params.confidence) / denom);
        int bound = needed > static_cast<double>(params.max_iters)
                        ? params.max_iters
                        : std::max(iterations, static_cast<int>(needed));
        effective_max = std::min(effective_max, std::max(bound, iterations));
      }
    }
  }

  if (!best.valid || best.count < params.min_inliers) {
    return Result<RansacResult>::failure(Status::NoConsensus,
                                         "consensus below the inlier minimum");
  }

  // Refit on the winning inliers; fall back to the sample model if the refit
  // degenerates.
  std::vector<Correspondence> inliers;
  inliers.reserve(best.count);
  for (int i = 0; i < n; ++i) {
    if (best.mask[i]) inliers.push_back(sorted[i]);
  }
  Mat3 h_final = best.h;
  if (auto refit = fit_homography_dlt(inliers)) {
    ScoredModel rescored = score_model(*refit, sorted, err_limit);
    if (rescored.valid && rescored.count >= params.min_inliers) {
      best = rescored;
      h_final = *refit;
    }
  }

  RansacResult out;
  out.H = h_final;
  out.inlier_count = best.count;
  out.iterations = iterations;
  out.inlier_mask.assign(n, 0);
  double err_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out.inlier_mask[canon[i]] = best.mask[i];
    if (best.mask[i]) {
      auto fwd = apply_homography(h_final, sorted[i].ut, sorted[i].vt);
      if (fwd) {
        err_sum += std::hypot(fwd->x() - sorted[i].uf, fwd->y() - sorted[i].vf);
      }
    }
  }
  out.mean_reprojection_error = best.count > 0 ? err_sum / best.count : 0.0;
  return Result<RansacResult>::success(std::move(out));
}

}  // namespace manip
