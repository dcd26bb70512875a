#pragma once

#include <Eigen/Dense>

#include "manip/error.hpp"

namespace manip {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

struct RigidTransform {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Mat4 matrix() const;
  static RigidTransform from_matrix(const Mat4& m);
};

// ZYX convention: R = Rz(phi) * Ry(theta) * Rx(psi).
struct EulerAngles {
  double psi = 0.0;    // roll, about x
  double theta = 0.0;  // pitch, about y
  double phi = 0.0;    // yaw, about z
  bool gimbal_lock = false;
};

Mat3 rot_x(double a);
Mat3 rot_y(double a);
Mat3 rot_z(double a);

RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);

// Columns of the result are the (normalized, re-orthogonalized) inputs.
// DegenerateBasis if any input is near zero or any pair has |cos| > 1e-2
// after normalization.
Result<Mat3> rotation_from_basis(const Vec3& i, const Vec3& j, const Vec3& k);

EulerAngles euler_from_rotation(const Mat3& r);
Mat3 rotation_from_euler(const EulerAngles& e);

bool is_rotation(const Mat3& r, double tol = 1e-9);

// Rotation angle of the relative rotation a^T * b, in [0, pi].
double rotation_distance(const Mat3& a, const Mat3& b);

// Wraps to (-pi, pi].
double wrap_angle(double a);

}  // namespace manip
