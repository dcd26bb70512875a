#pragma once

#include "manip/se3.hpp"

namespace manip {

// Object frame -> gripper frame, recorded at demonstration time.
struct GraspRecord {
  RigidTransform tg;
};

// tg = to^-1 * tb.
GraspRecord record_grasp(const RigidTransform& to, const RigidTransform& tb);

// tg' = to_new * tg.
RigidTransform adapt_grasp(const RigidTransform& to_new, const GraspRecord& g);

// Euler extraction of the grasp rotation; identical to euler_from_rotation.
EulerAngles grasp_angles(const RigidTransform& tg_prime);

}  // namespace manip
