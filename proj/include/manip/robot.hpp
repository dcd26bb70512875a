#pragma once

#include <string>

#include "manip/arm_kin.hpp"
#include "manip/base_kin.hpp"
#include "manip/json_io.hpp"

namespace manip {

struct RobotConfig {
  BaseGeometry base;
  DhTable dh = DhTable::ur5e();
  JointLimits limits = JointLimits::full();
  RigidTransform camera_extrinsic;  // camera pose in the arm base frame
  JointConfig q_home{};
};

// Built-in arm on a four-wheel omni base with a downward-looking overhead
// camera at (0.6, 0, 1.1) m.
RobotConfig default_robot();

Result<RobotConfig> robot_from_json(const Json& j);
Result<RobotConfig> load_robot(const std::string& path);
Json robot_to_json(const RobotConfig& robot);

}  // namespace manip
