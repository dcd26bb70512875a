#pragma once

#include "manip/homography.hpp"
#include "manip/image.hpp"
#include "manip/se3.hpp"

namespace manip {

// Pinhole intrinsics; +Z forward, +X right, +Y down (pixel axes).
struct CameraModel {
  double fx = 600.0;
  double fy = 600.0;
  double cx = 320.0;
  double cy = 240.0;
  double depth_scale = 0.001;  // m per stored depth unit
};

struct TemplateSpec {
  int w = 0;               // px
  int h = 0;               // px
  double physical_width = 0.0;  // m, template width in the object plane
};

struct PlanarPose {
  Vec3 position = Vec3::Zero();  // object center, camera frame, m
  Mat3 frame = Mat3::Identity();  // columns (i, j, k)
  EulerAngles euler;
  int inlier_count = 0;
  double mean_reprojection_error = 0.0;  // px
};

struct ReferencePixels {
  Eigen::Vector2d pc, px, py;
};

// Images of the template's center, right-edge midpoint (w, h/2), and
// top-edge midpoint (w/2, 0) under the homography.
Result<ReferencePixels> project_reference_points(const TemplateSpec& t, const Mat3& h);

// Inverse pinhole with bilinear depth over the valid (non-zero) neighbors;
// InvalidDepth when the pixel is outside the map or no neighbor is valid.
Result<Vec3> deproject(const Eigen::Vector2d& px, const DepthMap& depth,
                       const CameraModel& cam);

// Deprojects the reference points, forms the in-plane directions
// x = X(px) - X(pc), y = X(py) - X(pc), and builds the object frame
// (x/|x|, y/|y|, x cross y normalized); position is the deprojected center.
Result<PlanarPose> planar_pose_from_observation(const TemplateSpec& t, const Mat3& h,
                                                const DepthMap& depth,
                                                const CameraModel& cam);

}  // namespace manip
