#include "manip/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "manip/grasp.hpp"
#include "manip/rng.hpp"
#include "manip/tracking.hpp"

namespace manip {

namespace {

// Demonstration grasp: tool flipped onto the object plane, recorded at a
// standoff along the object z.
GraspRecord demo_grasp() {
  GraspRecord g;
  Mat3 r;
  r << 1, 0, 0, 0, -1, 0, 0, 0, -1;
  g.tg.R = r;
  g.tg.t = Vec3(0.0, 0.0, kGraspStandoff);
  return g;
}

double window_rms(const std::vector<PlanarPose>& history) {
  const std::size_t n = history.size();
  Vec3 mean = Vec3::Zero();
  for (std::size_t i = n - kTriggerWindow; i < n; ++i) {
    mean += history[i].position;
  }
  mean /= static_cast<double>(kTriggerWindow);
  double acc = 0.0;
  for (std::size_t i = n - kTriggerWindow; i < n; ++i) {
    acc += (history[i].position - mean).squaredNorm();
  }
  return std::sqrt(acc / static_cast<double>(kTriggerWindow));
}

}  // namespace

Json MetricsReport::to_json() const {
  Json j;
  j["frames"] = frames;
  j["trials"] = trials;
  j["threshold_cm"] = threshold_cm;
  j["tracking_accuracy"] = tracking_accuracy;
  j["mean_translation_error_m"] = mean_translation_error_m;
  j["max_translation_error_m"] = max_translation_error_m;
  j["mean_rotation_error_rad"] = mean_rotation_error_rad;
  j["max_rotation_error_rad"] = max_rotation_error_rad;
  j["detection_precision"] = detection_precision;
  j["detection_recall"] = detection_recall;
  j["true_positives"] = true_positives;
  j["false_positives"] = false_positives;
  j["false_negatives"] = false_negatives;
  j["true_negatives"] = true_negatives;
  j["grasp_trials"] = grasp_trials;
  j["grasp_triggered"] = grasp_triggered;
  j["grasp_success_rate"] = grasp_success_rate;
  if (has_timing) {
    j["mean_latency_ms"] = mean_latency_ms;
    j["throughput_fps"] = throughput_fps;
  }
  return j;
}

Result<MetricsReport> run_pipeline(const SceneSpec& scene, const RobotConfig& robot,
                                   const PipelineOverrides& overrides) {
  if (scene.trajectory.empty()) {
    return Result<MetricsReport>::failure(Status::InvalidArgument,
                                          "scene has no trajectory keys");
  }
  const int trials = overrides.trials.value_or(scene.trials);
  if (trials < 1) {
    return Result<MetricsReport>::failure(Status::InvalidArgument,
                                          "trials must be at least 1");
  }
  const std::uint64_t seed = overrides.seed.value_or(scene.seed);
  const double threshold_cm = overrides.threshold_cm.value_or(2.0);
  if (threshold_cm <= 0.0) {
    return Result<MetricsReport>::failure(Status::InvalidArgument,
                                          "threshold_cm must be positive");
  }
  const double threshold_m = threshold_cm / 100.0;

  const double t0 = scene.trajectory.front().t;
  const double t_end = scene.trajectory.back().t;
  const long frames_per_trial =
      static_cast<long>(std::floor((t_end - t0) * scene.frame_rate + 1e-9)) + 1;

  const TemplateSpec tmpl = template_spec(scene);
  const GraspRecord grasp = demo_grasp();
  const double rot_tol = kGraspRotTolDeg * std::numbers::pi / 180.0;

  MetricsReport rep;
  rep.trials = trials;
  rep.threshold_cm = threshold_cm;
  rep.grasp_trials = trials;
  rep.has_timing = overrides.include_timing;

  long tracked = 0, present_frames = 0;
  long pose_frames = 0;
  double terr_sum = 0.0, rerr_sum = 0.0;
  int grasp_successes = 0;
  std::chrono::nanoseconds elapsed{0};

  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(trial));
    TrackState state;
    JointConfig q = robot.q_home;
    bool triggered = false;
    bool success = false;

    for (long k = 0; k < frames_per_trial; ++k) {
      const double t = t0 + static_cast<double>(k) / scene.frame_rate;
      const std::uint64_t noise_seed = mix_seed(trial_seed, static_cast<std::uint64_t>(k));
      auto obs = synth_frame(scene, t, noise_seed);
      if (!obs) return Result<MetricsReport>::failure(obs.status, obs.message);

      const auto tick = std::chrono::steady_clock::now();

      bool consensus = false;
      std::optional<PlanarPose> frame_pose;
      RansacParams rp;
      rp.seed = mix_seed(noise_seed, 1);
      auto rr = estimate_homography_ransac(obs->correspondences, rp);
      if (rr) {
        consensus = true;
        auto pp = planar_pose_from_observation(tmpl, rr->H, obs->depth, scene.camera);
        if (pp) frame_pose = *pp;
      }

      state = track_update(state, frame_pose);

      if (state.visible && state.last_pose.has_value()) {
        RigidTransform to_cam;
        to_cam.R = state.last_pose->frame;
        to_cam.t = state.last_pose->position;
        const RigidTransform to_base = compose(robot.camera_extrinsic, to_cam);
        auto qc = follow_target(q, to_base, kGraspStandoff, robot.dh);
        if (qc) q = *qc;  // unreachable targets leave the arm where it is
      }

      if (!triggered &&
          static_cast<int>(state.pose_history.size()) >= kTriggerWindow &&
          window_rms(state.pose_history) < kTriggerRms) {
        triggered = true;
        RigidTransform to_est;
        to_est.R = state.last_pose->frame;
        to_est.t = state.last_pose->position;
        const RigidTransform g_est = adapt_grasp(to_est, grasp);
        const RigidTransform g_gt = adapt_grasp(obs->gt_pose, grasp);
        const double dt_err = (g_est.t - g_gt.t).norm();
        const double dr_err = rotation_distance(g_est.R, g_gt.R);
        success = dt_err < kGraspPosTol && dr_err < rot_tol;
      }

      elapsed += std::chrono::steady_clock::now() - tick;

      const bool present = obs->gt_present;
      if (present && consensus) ++rep.true_positives;
      else if (!present && consensus) ++rep.false_positives;
      else if (present && !consensus) ++rep.false_negatives;
      else ++rep.true_negatives;

      if (present) ++present_frames;
      if (frame_pose.has_value() && present) {
        const double terr = (frame_pose->position - obs->gt_pose.t).norm();
        const double rerr = rotation_distance(frame_pose->frame, obs->gt_pose.R);
        ++pose_frames;
        terr_sum += terr;
        rerr_sum += rerr;
        rep.max_translation_error_m = std::max(rep.max_translation_error_m, terr);
        rep.max_rotation_error_rad = std::max(rep.max_rotation_error_rad, rerr);
        if (terr <= threshold_m) ++tracked;
      }
      ++rep.frames;
    }

    if (triggered) ++rep.grasp_triggered;
    if (success) ++grasp_successes;
  }

  rep.tracking_accuracy =
      present_frames > 0
          ? static_cast<double>(tracked) / static_cast<double>(present_frames)
          : 1.0;
  if (pose_frames > 0) {
    rep.mean_translation_error_m = terr_sum / static_cast<double>(pose_frames);
    rep.mean_rotation_error_rad = rerr_sum / static_cast<double>(pose_frames);
  }
  const long declared = rep.true_positives + rep.false_positives;
  const long actual = rep.true_positives + rep.false_negatives;
  rep.detection_precision =
      declared > 0 ? static_cast<double>(rep.true_positives) / static_cast<double>(declared)
                   : 1.0;
  rep.detection_recall =
      actual > 0 ? static_cast<double>(rep.true_positives) / static_cast<double>(actual)
                 : 1.0;
  rep.grasp_success_rate =
      static_cast<double>(grasp_successes) / static_cast<double>(trials);

  if (rep.has_timing && rep.frames > 0) {
    const double total_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    rep.mean_latency_ms = total_ms / static_cast<double>(rep.frames);
    if (total_ms > 0.0) {
      rep.throughput_fps = 1000.0 * static_cast<double>(rep.frames) / total_ms;
    }
  }

  return Result<MetricsReport>::success(rep);
}

}  // namespace manip
