#pragma once

#include <json.hpp>

#include "manip/se3.hpp"

namespace manip {

// ordered_json keeps insertion order on dump, which makes every emitted
// document byte-stable for identical inputs.
using Json = nlohmann::ordered_json;

inline Json transform_to_json(const RigidTransform& t) {
  Json j;
  j["r"] = {t.R(0, 0), t.R(0, 1), t.R(0, 2), t.R(1, 0), t.R(1, 1),
            t.R(1, 2), t.R(2, 0), t.R(2, 1), t.R(2, 2)};
  j["t"] = {t.t.x(), t.t.y(), t.t.z()};
  return j;
}

inline Result<RigidTransform> transform_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("r") || !j.contains("t")) {
    return Result<RigidTransform>::failure(Status::Parse,
                                           "transform needs \"r\" (9 reals) and \"t\" (3 reals)");
  }
  const auto& r = j.at("r");
  const auto& t = j.at("t");
  if (!r.is_array() || r.size() != 9 || !t.is_array() || t.size() != 3) {
    return Result<RigidTransform>::failure(Status::Parse,
                                           "transform needs \"r\" (9 reals) and \"t\" (3 reals)");
  }
  RigidTransform out;
  for (int k = 0; k < 9; ++k) out.R(k / 3, k % 3) = r.at(k).get<double>();
  for (int k = 0; k < 3; ++k) out.t(k) = t.at(k).get<double>();
  if (!is_rotation(out.R, 1e-6)) {
    return Result<RigidTransform>::failure(Status::InvalidArgument,
                                           "\"r\" is not a rotation matrix");
  }
  return Result<RigidTransform>::success(out);
}

}  // namespace manip
