#include "manip/grasp.hpp"

namespace manip {

GraspRecord record_grasp(const RigidTransform& to, const RigidTransform& tb) {
  return {compose(invert(to), tb)};
}

RigidTransform adapt_grasp(const RigidTransform& to_new, const GraspRecord& g) {
  return compose(to_new, g.tg);
}

EulerAngles grasp_angles(const RigidTransform& tg_prime) {
  return euler_from_rotation(tg_prime.R);
}

}  // namespace manip
