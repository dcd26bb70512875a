#include "manip/base_kin.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "manip/se3.hpp"

namespace manip {

namespace {

bool geometry_valid(const BaseGeometry& g) { return g.r > 0.0 && g.L > 0.0; }

Eigen::Matrix<double, 4, 3> inverse_jacobian(const BaseGeometry& g) {
  Eigen::Matrix<double, 4, 3> j;
  j << 1, -1, -g.L,
       1,  1,  g.L,
       1, -1,  g.L,
       1,  1, -g.L;
  return j / g.r;
}

}  // namespace

Result<WheelSpeeds> wheel_speeds_from_body(const BodyVelocity& v, const BaseGeometry& g) {
  if (!geometry_valid(g)) {
    return Result<WheelSpeeds>::failure(Status::InvalidArgument,
                                        "wheel radius and offset must be positive");
  }
  Eigen::Vector4d w = inverse_jacobian(g) * Eigen::Vector3d(v.vx, v.vy, v.omega);
  return Result<WheelSpeeds>::success({w(0), w(1), w(2), w(3)});
}

Result<BodySolution> body_from_wheel_speeds(const WheelSpeeds& w, const BaseGeometry& g) {
  if (!geometry_valid(g)) {
    return Result<BodySolution>::failure(Status::InvalidArgument,
                                         "wheel radius and offset must be positive");
  }
  Eigen::Matrix<double, 4, 3> j = inverse_jacobian(g);
  Eigen::Vector4d ws(w.v1, w.v2, w.v3, w.v4);
  Eigen::Vector3d v = (j.transpose() * j).ldlt().solve(j.transpose() * ws);
  BodySolution out;
  out.v = {v(0), v(1), v(2)};
  out.residual = (j * v - ws).norm();
  return Result<BodySolution>::success(out);
}

Result<BasePose> integrate_pose(const BasePose& p, const BodyVelocity& v, double dt) {
  if (!(dt > 0.0)) {
    return Result<BasePose>::failure(Status::InvalidArgument, "dt must be positive");
  }
  double c = std::cos(p.theta), s = std::sin(p.theta);
  BasePose out;
  out.x = p.x + dt * (c * v.vx - s * v.vy);
  out.y = p.y + dt * (s * v.vx + c * v.vy);
  out.theta = wrap_angle(p.theta + dt * v.omega);
  return Result<BasePose>::success(out);
}

}  // namespace manip
