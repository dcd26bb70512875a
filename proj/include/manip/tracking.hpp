#pragma once

#include <optional>
#include <vector>

#include "manip/arm_kin.hpp"
#include "manip/planar_pose.hpp"

namespace manip {

inline constexpr int kMissLimit = 5;      // consecutive misses before visibility drops
inline constexpr int kHistoryBound = 32;  // retained poses

struct TrackState {
  std::optional<PlanarPose> last_pose;  // frozen grasp target after visibility loss
  bool visible = false;
  int frames_since_detection = 0;
  std::vector<PlanarPose> pose_history;  // most recent last, bounded
};

TrackState track_update(const TrackState& s, const std::optional<PlanarPose>& detection);

// Joint command toward the object: tool held standoff_m along the object's
// approach axis +k with the tool z pointing back at the object; nearest IK
// branch to q_now.
Result<JointConfig> follow_target(const JointConfig& q_now, const RigidTransform& object_pose,
                                  double standoff_m, const DhTable& dh);

}  // namespace manip
