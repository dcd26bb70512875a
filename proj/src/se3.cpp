#include "manip/se3.hpp"

#include <cmath>
#include <numbers>

namespace manip {

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok:
      return "OK";
    case Status::InvalidArgument:
      return "E_INVALID_ARGUMENT";
    case Status::Io:
      return "E_IO";
    case Status::Parse:
      return "E_PARSE";
    case Status::Unreachable:
      return "E_UNREACHABLE";
    case Status::NoConsensus:
      return "E_NO_CONSENSUS";
    case Status::TooFewCorrespondences:
      return "E_TOO_FEW_CORRESPONDENCES";
    case Status::InvalidDepth:
      return "E_INVALID_DEPTH";
    case Status::DegenerateBasis:
      return "E_DEGENERATE_BASIS";
    case Status::PointAtInfinity:
      return "E_POINT_AT_INFINITY";
    case Status::ImageTooSmall:
      return "E_IMAGE_TOO_SMALL";
    case Status::EmptyInput:
      return "E_EMPTY_INPUT";
    case Status::Internal:
      return "E_INTERNAL";
  }
  return "E_INTERNAL";
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = R;
  m.topRightCorner<3, 1>() = t;
  return m;
}

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
  RigidTransform out;
  out.R = m.topLeftCorner<3, 3>();
  out.t = m.topRightCorner<3, 1>();
  return out;
}

Mat3 rot_x(double a) {
  double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rot_y(double a) {
  double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 rot_z(double a) {
  double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {a.R * b.R, a.R * b.t + a.t};
}

RigidTransform invert(const RigidTransform& t) {
  Mat3 rt = t.R.transpose();
  return {rt, -(rt * t.t)};
}

Result<Mat3> rotation_from_basis(const Vec3& i, const Vec3& j, const Vec3& k) {
  Vec3 cols[3] = {i, j, k};
  for (auto& c : cols) {
    double n = c.norm();
    if (n < 1e-12) {
      return Result<Mat3>::failure(Status::DegenerateBasis, "zero-length basis vector");
    }
    c /= n;
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (std::abs(cols[a].dot(cols[b])) > 1e-2) {
        return Result<Mat3>::failure(Status::DegenerateBasis, "basis vectors not orthogonal");
      }
    }
  }
  Mat3 m;
  m.col(0) = cols[0];
  m.col(1) = cols[1];
  m.col(2) = cols[2];
  // Nearest rotation in Frobenius norm: polar factor of m.
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return Result<Mat3>::success(r);
}

EulerAngles euler_from_rotation(const Mat3& r) {
  EulerAngles e;
  double r31 = r(2, 0);
  double hyp = std::sqrt(r(2, 1) * r(2, 1) + r(2, 2) * r(2, 2));
  e.theta = std::atan2(-r31, hyp);
  if (std::abs(r31) > 1.0 - 1e-9) {
    // theta = +/- pi/2: only phi +/- psi is determined; fix phi = 0.
    e.gimbal_lock = true;
    e.phi = 0.0;
    if (r31 < 0) {
      e.psi = std::atan2(r(0, 1), r(0, 2));
    } else {
      e.psi = std::atan2(-r(0, 1), -r(0, 2));
    }
  } else {
    e.psi = std::atan2(r(2, 1), r(2, 2));
    e.phi = std::atan2(r(1, 0), r(0, 0));
  }
  e.psi = wrap_angle(e.psi);
  e.phi = wrap_angle(e.phi);
  return e;
}

Mat3 rotation_from_euler(const EulerAngles& e) {
  return rot_z(e.phi) * rot_y(e.theta) * rot_x(e.psi);
}

bool is_rotation(const Mat3& r, double tol) {
  if (((r.transpose() * r) - Mat3::Identity()).norm() >= tol) return false;
  return std::abs(r.determinant() - 1.0) < tol;
}

double rotation_distance(const Mat3& a, const Mat3& b) {
  const Mat3 m = a.transpose() * b;
  // acos((tr-1)/2) loses half the working precision near 0; the atan2 of the
  // skew norm against the trace keeps small angles exact to machine epsilon.
  const double sx = m(2, 1) - m(1, 2);
  const double sy = m(0, 2) - m(2, 0);
  const double sz = m(1, 0) - m(0, 1);
  const double s = 0.5 * std::sqrt(sx * sx + sy * sy + sz * sz);
  const double c = (m.trace() - 1.0) / 2.0;
  return std::atan2(s, c);
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

}  // namespace manip
