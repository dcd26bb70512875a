#pragma once

#include "manip/error.hpp"

namespace manip {

struct BasePose {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad, wrapped to (-pi, pi]
};

struct BodyVelocity {
  double vx = 0.0;     // m/s
  double vy = 0.0;     // m/s
  double omega = 0.0;  // rad/s
};

// Wheel angular rates, rad/s.
struct WheelSpeeds {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double v4 = 0.0;
};

struct BaseGeometry {
  double r = 0.1016;  // wheel radius, m
  double L = 0.2775;  // wheel distance from base center, m
};

struct BodySolution {
  BodyVelocity v;
  double residual = 0.0;  // ||J_inv * v - w||, zero for consistent wheel speeds
};

// [v1..v4]^T = J_inv * [vx, vy, omega]^T with rows
// (1/r,-1/r,-L/r), (1/r,1/r,L/r), (1/r,-1/r,L/r), (1/r,1/r,-L/r).
Result<WheelSpeeds> wheel_speeds_from_body(const BodyVelocity& v, const BaseGeometry& g);

// Least-squares inverse of the map above (Moore-Penrose via 3x3 normal equations).
Result<BodySolution> body_from_wheel_speeds(const WheelSpeeds& w, const BaseGeometry& g);

// First-order Euler step of the body velocity rotated into the world frame.
Result<BasePose> integrate_pose(const BasePose& p, const BodyVelocity& v, double dt);

}  // namespace manip
