#include "manip/tracking.hpp"

namespace manip {

TrackState track_update(const TrackState& s, const std::optional<PlanarPose>& detection) {
  TrackState out = s;
  if (detection.has_value()) {
    out.visible = true;
    out.frames_since_detection = 0;
    out.last_pose = *detection;
    out.pose_history.push_back(*detection);
    if (static_cast<int>(out.pose_history.size()) > kHistoryBound) {
      out.pose_history.erase(out.pose_history.begin());
    }
  } else {
    ++out.frames_since_detection;
    if (out.frames_since_detection >= kMissLimit) {
      out.visible = false;  // last_pose stays as the frozen grasp target
    }
  }
  return out;
}

Result<JointConfig> follow_target(const JointConfig& q_now, const RigidTransform& object_pose,
                                  double standoff_m, const DhTable& dh) {
  // Hover on the +k side of the object plane with the tool z pointing back
  // down the approach axis at the object.
  const Vec3 k = object_pose.R.col(2);
  const Vec3 i = object_pose.R.col(0);
  RigidTransform target;
  target.R.col(0) = i;
  target.R.col(1) = -k.cross(i);
  target.R.col(2) = -k;
  target.t = object_pose.t + standoff_m * k;

  auto solutions = ik_solve(target, dh);
  if (!solutions) return Result<JointConfig>::failure(solutions.status, solutions.message);
  return ik_select(*solutions, q_now);
}

}  // namespace manip
