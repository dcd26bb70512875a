#pragma once

#include <array>
#include <vector>

#include "manip/se3.hpp"

namespace manip {

// Standard DH link: T = Rz(theta + theta_offset) * Tz(d) * Tx(a) * Rx(alpha).
struct DhRow {
  double a = 0.0;             // m
  double d = 0.0;             // m
  double alpha = 0.0;         // rad
  double theta_offset = 0.0;  // rad
};

struct DhTable {
  std::array<DhRow, 6> rows;

  static DhTable ur5e();
};

using JointConfig = std::array<double, 6>;

struct JointLimits {
  std::array<double, 6> lo;
  std::array<double, 6> hi;

  // [-2pi, 2pi] per joint.
  static JointLimits full();
};

struct IkSolution {
  JointConfig q{};
  int shoulder = +1;  // sign of the theta1 acos branch
  int wrist = +1;     // sign of the theta5 acos branch
  int elbow = +1;     // sign of the theta3 acos branch
  bool near_singular = false;
};

struct IkSolutionSet {
  std::vector<IkSolution> solutions;
  bool near_singular = false;  // any member flagged
};

RigidTransform dh_link_transform(const DhRow& row, double theta);

RigidTransform fk_transform(const JointConfig& q, const DhTable& dh);

// Closed-form position for the six-axis geometry of the default table
// (a1=a4=a5=a6=0, d2=d3=0, alpha=(pi/2,0,0,pi/2,-pi/2,0)); equal to the
// fk_transform translation within 1e-12.
Vec3 fk_position(const JointConfig& q, const DhTable& dh);

// As-published closed form, kept verbatim for reference. Deviates from the
// matrix chain in three term groups; see the dual-formulation test for the
// exact deviation terms. Not used by any shipping code path.
Vec3 fk_position_published(const JointConfig& q, const DhTable& dh);

// All real closed-form branches (up to 8 = shoulder x wrist x elbow), each
// verified against fk_transform before inclusion. theta6_reference fills in
// theta6 when |sin theta5| < 1e-6 makes it indeterminate (solution flagged).
Result<IkSolutionSet> ik_solve(const RigidTransform& target, const DhTable& dh,
                               double theta6_reference = 0.0);

// Planar shoulder/elbow angles computed from the raw end-effector position as
// published (treats the TCP as the wrist center, ignoring the d4/d5/d6
// offsets). Reference only; does not close the FK round trip and is not used
// by ik_solve.
struct PlanarReference {
  double r_s = 0.0;
  double phi = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
};
Result<PlanarReference> planar_subchain_published(const Vec3& p, const DhTable& dh,
                                                  int elbow = +1);

// Weighted nearest solution: argmin sum_i w_i * wrap(q_i - ref_i)^2 with
// w = (6,5,4,3,2,1); ties keep the earliest branch in enumeration order.
Result<JointConfig> ik_select(const IkSolutionSet& set, const JointConfig& q_ref);

}  // namespace manip
