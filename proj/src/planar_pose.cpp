#include "manip/planar_pose.hpp"

#include <cmath>

namespace manip {

Result<ReferencePixels> project_reference_points(const TemplateSpec& t, const Mat3& h) {
  const double w = t.w, hh = t.h;
  ReferencePixels out;
  struct {
    double u, v;
    Eigen::Vector2d* dst;
  } pts[3] = {{w / 2, hh / 2, &out.pc}, {w, hh / 2, &out.px}, {w / 2, 0, &out.py}};
  for (auto& p : pts) {
    auto mapped = apply_homography(h, p.u, p.v);
    if (!mapped) return Result<ReferencePixels>::failure(mapped.status, mapped.message);
    *p.dst = *mapped;
  }
  return Result<ReferencePixels>::success(out);
}

Result<Vec3> deproject(const Eigen::Vector2d& px, const DepthMap& depth,
                       const CameraModel& cam) {
  const double u = px.x(), v = px.y();
  if (!(u >= 0.0) || !(v >= 0.0) || u > depth.width - 1 || v > depth.height - 1) {
    return Result<Vec3>::failure(Status::InvalidDepth, "pixel outside the depth map");
  }
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const double fu = u - x0, fv = v - y0;

  double weight_sum = 0.0, value_sum = 0.0;
  for (int dy = 0; dy <= 1; ++dy) {
    for (int dx = 0; dx <= 1; ++dx) {
      int x = x0 + dx, y = y0 + dy;
      if (x >= depth.width || y >= depth.height) continue;
      std::uint16_t d = depth.at(x, y);
      if (d == 0) continue;
      double wgt = (dx ? fu : 1.0 - fu) * (dy ? fv : 1.0 - fv);
      weight_sum += wgt;
      value_sum += wgt * d;
    }
  }
  if (weight_sum < 1e-12) {
    return Result<Vec3>::failure(Status::InvalidDepth, "no valid depth at pixel");
  }
  const double z = (value_sum / weight_sum) * cam.depth_scale;
  return Result<Vec3>::success(
      Vec3((u - cam.cx) * z / cam.fx, (v - cam.cy) * z / cam.fy, z));
}

Result<PlanarPose> planar_pose_from_observation(const TemplateSpec& t, const Mat3& h,
                                                const DepthMap& depth,
                                                const CameraModel& cam) {
  auto ref = project_reference_points(t, h);
  if (!ref) return Result<PlanarPose>::failure(ref.status, ref.message);

  auto xc = deproject(ref->pc, depth, cam);
  if (!xc) return Result<PlanarPose>::failure(xc.status, xc.message);
  auto xx = deproject(ref->px, depth, cam);
  if (!xx) return Result<PlanarPose>::failure(xx.status, xx.message);
  auto xy = deproject(ref->py, depth, cam);
  if (!xy) return Result<PlanarPose>::failure(xy.status, xy.message);

  const Vec3 x_dir = *xx - *xc;
  const Vec3 y_dir = *xy - *xc;
  const Vec3 cross = x_dir.cross(y_dir);
  if (cross.norm() < 1e-9) {
    return Result<PlanarPose>::failure(Status::DegenerateBasis,
                                       "grazing view: in-plane directions are parallel");
  }
  auto frame = rotation_from_basis(x_dir.normalized(), y_dir.normalized(),
                                   cross.normalized());
  if (!frame) return Result<PlanarPose>::failure(frame.status, frame.message);

  PlanarPose pose;
  pose.position = *xc;
  pose.frame = *frame;
  pose.euler = euler_from_rotation(pose.frame);
  return Result<PlanarPose>::success(pose);
}

}  // namespace manip
