#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "manip/homography.hpp"
#include "manip/image.hpp"
#include "manip/json_io.hpp"
#include "manip/planar_pose.hpp"
#include "manip/se3.hpp"

namespace manip {

struct TrajectoryKey {
  double t = 0.0;        // s
  RigidTransform pose;   // object in the camera frame
};

// Synthetic track-and-grasp scene: a planar textured object moving through
// the camera view. Everything downstream of the seed is deterministic.
struct SceneSpec {
  // Planar template.
  int template_w = 200;
  int template_h = 150;
  double physical_width = 0.3;  // m across the template width
  int keypoint_count = 200;
  std::uint64_t keypoint_seed = 1;

  // Camera.
  CameraModel camera;
  int image_w = 640;
  int image_h = 480;

  // Motion. Piecewise-linear translation between keys; rotation held at the
  // nearest key.
  std::vector<TrajectoryKey> trajectory;
  double frame_rate = 30.0;  // Hz

  // Corruption.
  double pixel_noise_px = 0.0;
  double outlier_rate = 0.0;     // in [0, 1)
  double depth_noise_m = 0.0;
  double depth_hole_rate = 0.0;  // in [0, 1)
  double background_depth = 3.0;  // m, flat plane behind the object
  std::vector<std::pair<double, double>> occlusion_spans;  // [t0, t1] s

  // Control.
  std::uint64_t seed = 0;
  int trials = 1;
};

// One rendered frame: feature correspondences already matched against the
// template (the estimation pipeline consumes these), a depth map, and the
// ground truth kept off the estimation path.
struct FrameObservation {
  std::vector<Correspondence> correspondences;
  DepthMap depth;
  double timestamp = 0.0;
  RigidTransform gt_pose;   // object in the camera frame
  bool gt_present = true;   // false while occluded
};

// Template keypoints: keypoint_count pixels scattered uniformly with a 4 px
// margin, deterministic per keypoint_seed.
std::vector<Eigen::Vector2d> template_keypoints(const SceneSpec& scene);

// Pose at time t (clamped to the key range).
RigidTransform trajectory_pose(const SceneSpec& scene, double t);

// Renders the frame at time t. The noise_seed fixes every stochastic choice
// (pixel noise, outlier selection and placement, depth noise and holes).
// Fails InvalidArgument when the object plane center sits behind the camera.
Result<FrameObservation> synth_frame(const SceneSpec& scene, double t,
                                     std::uint64_t noise_seed);

TemplateSpec template_spec(const SceneSpec& scene);

Result<SceneSpec> scene_from_json(const Json& j);
Result<SceneSpec> load_scene(const std::string& path);

}  // namespace manip
