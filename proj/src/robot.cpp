#include "manip/robot.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace manip {

namespace {

Result<bool> read_number_array(const Json& j, const char* key, double* out,
                               std::size_t n) {
  if (!j.contains(key)) return Result<bool>::success(true);
  const Json& a = j.at(key);
  if (!a.is_array() || a.size() != n) {
    return Result<bool>::failure(Status::Parse,
                                 std::string(key) + " must be an array of " +
                                     std::to_string(n) + " numbers");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!a[i].is_number()) {
      return Result<bool>::failure(Status::Parse,
                                   std::string(key) + "[" + std::to_string(i) +
                                       "] is not a number");
    }
    out[i] = a[i].get<double>();
  }
  return Result<bool>::success(true);
}

}  // namespace

RobotConfig default_robot() {
  RobotConfig robot;
  constexpr double kPi = std::numbers::pi;
  robot.q_home = {0.0, -kPi / 2.0, kPi / 2.0, 0.0, kPi / 2.0, 0.0};
  // Overhead camera: optical axis straight down, image x along -Y of the
  // base, image y along -X. det(R) = +1.
  Mat3 r;
  r.col(0) = Vec3(0.0, -1.0, 0.0);
  r.col(1) = Vec3(-1.0, 0.0, 0.0);
  r.col(2) = Vec3(0.0, 0.0, -1.0);
  robot.camera_extrinsic.R = r;
  robot.camera_extrinsic.t = Vec3(0.6, 0.0, 1.1);
  return robot;
}

Result<RobotConfig> robot_from_json(const Json& j) {
  if (!j.is_object()) {
    return Result<RobotConfig>::failure(Status::Parse,
                                        "robot config must be a JSON object");
  }
  RobotConfig robot = default_robot();

  if (j.contains("wheel_radius_m")) {
    if (!j.at("wheel_radius_m").is_number()) {
      return Result<RobotConfig>::failure(Status::Parse,
                                          "wheel_radius_m must be a number");
    }
    robot.base.r = j.at("wheel_radius_m").get<double>();
  }
  if (j.contains("wheel_offset_m")) {
    if (!j.at("wheel_offset_m").is_number()) {
      return Result<RobotConfig>::failure(Status::Parse,
                                          "wheel_offset_m must be a number");
    }
    robot.base.L = j.at("wheel_offset_m").get<double>();
  }
  if (robot.base.r <= 0.0 || robot.base.L <= 0.0) {
    return Result<RobotConfig>::failure(
        Status::InvalidArgument, "wheel geometry must be strictly positive");
  }

  if (j.contains("dh")) {
    const Json& rows = j.at("dh");
    if (!rows.is_array() || rows.size() != 6) {
      return Result<RobotConfig>::failure(Status::Parse,
                                          "dh must be an array of 6 rows");
    }
    for (int i = 0; i < 6; ++i) {
      const Json& row = rows[i];
      if (!row.is_object()) {
        return Result<RobotConfig>::failure(Status::Parse,
                                            "dh rows must be objects");
      }
      for (const char* key : {"a", "d", "alpha", "theta_offset"}) {
        if (!row.contains(key) || !row.at(key).is_number()) {
          return Result<RobotConfig>::failure(
              Status::Parse,
              "dh row " + std::to_string(i) + " missing numeric '" + key + "'");
        }
      }
      robot.dh.rows[i].a = row.at("a").get<double>();
      robot.dh.rows[i].d = row.at("d").get<double>();
      robot.dh.rows[i].alpha = row.at("alpha").get<double>();
      robot.dh.rows[i].theta_offset = row.at("theta_offset").get<double>();
    }
  }

  if (j.contains("joint_limits")) {
    const Json& lims = j.at("joint_limits");
    if (!lims.is_array() || lims.size() != 6) {
      return Result<RobotConfig>::failure(
          Status::Parse, "joint_limits must be an array of 6 [lo, hi] pairs");
    }
    for (int i = 0; i < 6; ++i) {
      const Json& pair = lims[i];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        return Result<RobotConfig>::failure(
            Status::Parse, "joint_limits[" + std::to_string(i) +
                               "] must be a numeric [lo, hi] pair");
      }
      robot.limits.lo[i] = pair[0].get<double>();
      robot.limits.hi[i] = pair[1].get<double>();
      if (!(robot.limits.lo[i] < robot.limits.hi[i])) {
        return Result<RobotConfig>::failure(
            Status::InvalidArgument,
            "joint_limits[" + std::to_string(i) + "] has lo >= hi");
      }
    }
  }

  if (j.contains("camera_extrinsic")) {
    auto pose = transform_from_json(j.at("camera_extrinsic"));
    if (!pose) {
      return Result<RobotConfig>::failure(
          pose.status, "camera_extrinsic: " + pose.message);
    }
    robot.camera_extrinsic = *pose;
  }

  double q[6];
  for (int i = 0; i < 6; ++i) q[i] = robot.q_home[i];
  auto qres = read_number_array(j, "q_home", q, 6);
  if (!qres) return Result<RobotConfig>::failure(qres.status, qres.message);
  for (int i = 0; i < 6; ++i) robot.q_home[i] = q[i];

  return Result<RobotConfig>::success(robot);
}

Result<RobotConfig> load_robot(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return Result<RobotConfig>::failure(Status::Io,
                                        "cannot open robot config " + path);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    return Result<RobotConfig>::failure(Status::Parse,
                                        "invalid JSON in " + path);
  }
  return robot_from_json(j);
}

Json robot_to_json(const RobotConfig& robot) {
  Json j;
  j["wheel_radius_m"] = robot.base.r;
  j["wheel_offset_m"] = robot.base.L;
  Json rows = Json::array();
  for (const DhRow& row : robot.dh.rows) {
    Json r;
    r["a"] = row.a;
    r["d"] = row.d;
    r["alpha"] = row.alpha;
    r["theta_offset"] = row.theta_offset;
    rows.push_back(r);
  }
  j["dh"] = rows;
  Json lims = Json::array();
  for (int i = 0; i < 6; ++i) {
    lims.push_back(Json::array({robot.limits.lo[i], robot.limits.hi[i]}));
  }
  j["joint_limits"] = lims;
  j["camera_extrinsic"] = transform_to_json(robot.camera_extrinsic);
  Json q = Json::array();
  for (int i = 0; i < 6; ++i) q.push_back(robot.q_home[i]);
  j["q_home"] = q;
  return j;
}

}  // namespace manip
