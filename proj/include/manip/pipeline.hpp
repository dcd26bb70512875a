#pragma once

#include <cstdint>
#include <optional>

#include "manip/json_io.hpp"
#include "manip/robot.hpp"
#include "manip/scene.hpp"

namespace manip {

inline constexpr double kGraspStandoff = 0.15;   // m along the approach axis
inline constexpr int kTriggerWindow = 10;        // poses in the stability test
inline constexpr double kTriggerRms = 0.005;     // m, RMS about the window mean
inline constexpr double kGraspPosTol = 0.01;     // m
inline constexpr double kGraspRotTolDeg = 5.0;

struct PipelineOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold_cm;
  std::optional<int> trials;
  bool include_timing = false;  // wall-clock fields are inherently run-dependent
};

struct MetricsReport {
  long frames = 0;  // processed across all trials
  int trials = 1;
  double threshold_cm = 2.0;
  double tracking_accuracy = 0.0;
  double mean_translation_error_m = 0.0;
  double max_translation_error_m = 0.0;
  double mean_rotation_error_rad = 0.0;
  double max_rotation_error_rad = 0.0;
  double detection_precision = 1.0;
  double detection_recall = 1.0;
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;
  long true_negatives = 0;
  int grasp_trials = 0;
  int grasp_triggered = 0;
  double grasp_success_rate = 0.0;
  bool has_timing = false;
  double mean_latency_ms = 0.0;
  double throughput_fps = 0.0;

  Json to_json() const;
};

// Full per-frame loop over every trial: synthesize, estimate (RANSAC
// homography -> planar pose), track, command the arm, attempt one grasp per
// trial once the pose history stabilizes. Deterministic given the scene and
// overrides when include_timing is off.
Result<MetricsReport> run_pipeline(const SceneSpec& scene, const RobotConfig& robot,
                                   const PipelineOverrides& overrides = {});

}  // namespace manip
