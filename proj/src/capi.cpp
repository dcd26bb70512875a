#include "manip/capi.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "manip/arm_kin.hpp"
#include "manip/base_kin.hpp"
#include "manip/features.hpp"
#include "manip/grasp.hpp"
#include "manip/homography.hpp"
#include "manip/image.hpp"
#include "manip/matching.hpp"
#include "manip/pipeline.hpp"
#include "manip/planar_pose.hpp"
#include "manip/robot.hpp"
#include "manip/scene.hpp"
#include "manip/se3.hpp"
#include "manip/tracking.hpp"
#include "manip/workspace.hpp"

using manip::Status;

static_assert(static_cast<int>(Status::Ok) == MANIP_OK);
static_assert(static_cast<int>(Status::InvalidArgument) == MANIP_E_INVALID_ARGUMENT);
static_assert(static_cast<int>(Status::Io) == MANIP_E_IO);
static_assert(static_cast<int>(Status::Parse) == MANIP_E_PARSE);
static_assert(static_cast<int>(Status::Unreachable) == MANIP_E_UNREACHABLE);
static_assert(static_cast<int>(Status::NoConsensus) == MANIP_E_NO_CONSENSUS);
static_assert(static_cast<int>(Status::TooFewCorrespondences) ==
              MANIP_E_TOO_FEW_CORRESPONDENCES);
static_assert(static_cast<int>(Status::InvalidDepth) == MANIP_E_INVALID_DEPTH);
static_assert(static_cast<int>(Status::DegenerateBasis) == MANIP_E_DEGENERATE_BASIS);
static_assert(static_cast<int>(Status::PointAtInfinity) == MANIP_E_POINT_AT_INFINITY);
static_assert(static_cast<int>(Status::ImageTooSmall) == MANIP_E_IMAGE_TOO_SMALL);
static_assert(static_cast<int>(Status::EmptyInput) == MANIP_E_EMPTY_INPUT);
static_assert(static_cast<int>(Status::Internal) == MANIP_E_INTERNAL);

struct manip_robot {
  manip::RobotConfig cfg;
};
struct manip_image {
  manip::GrayImage img;
};
struct manip_depth {
  manip::DepthMap map;
};
struct manip_features {
  manip::FeatureSet fs;
};
struct manip_matches {
  manip::MatchResult res;
};
struct manip_workspace {
  manip::WorkspaceStats ws;
};

namespace {

thread_local std::string g_error;

int ok() {
  g_error.clear();
  return MANIP_OK;
}

int fail(Status s, const std::string& msg) {
  g_error = msg;
  return static_cast<int>(s);
}

template <typename T>
int fail(const manip::Result<T>& r) {
  return fail(r.status, r.message);
}

int fail_null(const char* what) {
  return fail(Status::InvalidArgument, std::string(what) + " is null");
}

void pose_to_array(const manip::RigidTransform& p, double out[16]) {
  const manip::Mat4 m = p.matrix();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r * 4 + c] = m(r, c);
}

manip::Result<manip::RigidTransform> pose_from_array(const double p[16]) {
  using R = manip::Result<manip::RigidTransform>;
  manip::Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = p[r * 4 + c];
  if (std::abs(m(3, 0)) > 1e-9 || std::abs(m(3, 1)) > 1e-9 ||
      std::abs(m(3, 2)) > 1e-9 || std::abs(m(3, 3) - 1.0) > 1e-9) {
    return R::failure(Status::InvalidArgument,
                      "pose bottom row must be (0, 0, 0, 1)");
  }
  manip::RigidTransform t = manip::RigidTransform::from_matrix(m);
  if (!manip::is_rotation(t.R, 1e-6)) {
    return R::failure(Status::InvalidArgument,
                      "pose rotation block is not orthonormal");
  }
  return R::success(t);
}

void euler_out(const manip::EulerAngles& e, double out_zyx[3], int* gimbal) {
  out_zyx[0] = e.phi;    // yaw, about z
  out_zyx[1] = e.theta;  // pitch, about y
  out_zyx[2] = e.psi;    // roll, about x
  if (gimbal != nullptr) *gimbal = e.gimbal_lock ? 1 : 0;
}

}  // namespace

extern "C" {

const char* manip_status_name(int status) {
  return manip::status_name(static_cast<Status>(status));
}

const char* manip_last_error(void) { return g_error.c_str(); }

int manip_robot_default(manip_robot** out) {
  if (out == nullptr) return fail_null("out");
  *out = new manip_robot{manip::default_robot()};
  return ok();
}

int manip_robot_load(const char* path, manip_robot** out) {
  if (path == nullptr) return fail_null("path");
  if (out == nullptr) return fail_null("out");
  auto cfg = manip::load_robot(path);
  if (!cfg) return fail(cfg);
  *out = new manip_robot{*cfg};
  return ok();
}

void manip_robot_free(manip_robot* robot) { delete robot; }

int manip_fk(const manip_robot* robot, const double q[6], double out_pose[16]) {
  if (robot == nullptr) return fail_null("robot");
  if (q == nullptr) return fail_null("q");
  if (out_pose == nullptr) return fail_null("out_pose");
  manip::JointConfig qc;
  for (int i = 0; i < 6; ++i) qc[i] = q[i];
  pose_to_array(manip::fk_transform(qc, robot->cfg.dh), out_pose);
  return ok();
}

int manip_ik(const manip_robot* robot, const double pose[16], double theta6_reference,
             double out_q[48], uint8_t out_near_singular[8], int* out_count) {
  if (robot == nullptr) return fail_null("robot");
  if (pose == nullptr) return fail_null("pose");
  if (out_q == nullptr) return fail_null("out_q");
  if (out_count == nullptr) return fail_null("out_count");
  auto target = pose_from_array(pose);
  if (!target) return fail(target);
  auto set = manip::ik_solve(*target, robot->cfg.dh, theta6_reference);
  if (!set) return fail(set);
  const int count = static_cast<int>(set->solutions.size());
  for (int s = 0; s < count; ++s) {
    for (int i = 0; i < 6; ++i) out_q[s * 6 + i] = set->solutions[s].q[i];
    if (out_near_singular != nullptr) {
      out_near_singular[s] = set->solutions[s].near_singular ? 1 : 0;
    }
  }
  *out_count = count;
  return ok();
}

int manip_ik_select(const manip_robot* robot, const double pose[16],
                    const double q_ref[6], double out_q[6]) {
  if (robot == nullptr) return fail_null("robot");
  if (pose == nullptr) return fail_null("pose");
  if (q_ref == nullptr) return fail_null("q_ref");
  if (out_q == nullptr) return fail_null("out_q");
  auto target = pose_from_array(pose);
  if (!target) return fail(target);
  auto set = manip::ik_solve(*target, robot->cfg.dh, q_ref[5]);
  if (!set) return fail(set);
  manip::JointConfig ref;
  for (int i = 0; i < 6; ++i) ref[i] = q_ref[i];
  auto q = manip::ik_select(*set, ref);
  if (!q) return fail(q);
  for (int i = 0; i < 6; ++i) out_q[i] = (*q)[i];
  return ok();
}

int manip_base_wheel_speeds(const manip_robot* robot, double vx, double vy,
                            double omega, double out_w[4]) {
  if (robot == nullptr) return fail_null("robot");
  if (out_w == nullptr) return fail_null("out_w");
  auto w = manip::wheel_speeds_from_body({vx, vy, omega}, robot->cfg.base);
  if (!w) return fail(w);
  out_w[0] = w->v1;
  out_w[1] = w->v2;
  out_w[2] = w->v3;
  out_w[3] = w->v4;
  return ok();
}

int manip_base_body_velocity(const manip_robot* robot, const double w[4],
                             double out_v[3], double* out_residual) {
  if (robot == nullptr) return fail_null("robot");
  if (w == nullptr) return fail_null("w");
  if (out_v == nullptr) return fail_null("out_v");
  auto sol = manip::body_from_wheel_speeds({w[0], w[1], w[2], w[3]}, robot->cfg.base);
  if (!sol) return fail(sol);
  out_v[0] = sol->v.vx;
  out_v[1] = sol->v.vy;
  out_v[2] = sol->v.omega;
  if (out_residual != nullptr) *out_residual = sol->residual;
  return ok();
}

int manip_base_integrate(const double pose[3], const double v[3], double dt,
                         double out_pose[3]) {
  if (pose == nullptr) return fail_null("pose");
  if (v == nullptr) return fail_null("v");
  if (out_pose == nullptr) return fail_null("out_pose");
  auto next = manip::integrate_pose({pose[0], pose[1], pose[2]},
                                    {v[0], v[1], v[2]}, dt);
  if (!next) return fail(next);
  out_pose[0] = next->x;
  out_pose[1] = next->y;
  out_pose[2] = next->theta;
  return ok();
}

int manip_workspace_sample(const manip_robot* robot, uint64_t samples, uint64_t seed,
                           manip_workspace** out) {
  if (robot == nullptr) return fail_null("robot");
  if (out == nullptr) return fail_null("out");
  *out = new manip_workspace{
      manip::sample_workspace(samples, seed, robot->cfg.dh, robot->cfg.limits)};
  return ok();
}

void manip_workspace_free(manip_workspace* ws) { delete ws; }

int manip_workspace_stats(const manip_workspace* ws, uint64_t* out_samples,
                          double* out_max_reach, double* out_volume_m3) {
  if (ws == nullptr) return fail_null("ws");
  if (out_samples != nullptr) *out_samples = ws->ws.samples.size();
  if (out_max_reach != nullptr) *out_max_reach = ws->ws.max_reach;
  if (out_volume_m3 != nullptr) *out_volume_m3 = ws->ws.volume_estimate;
  return ok();
}

int manip_workspace_write_csv(const manip_workspace* ws, const char* path) {
  if (ws == nullptr) return fail_null("ws");
  if (path == nullptr) return fail_null("path");
  auto r = manip::write_workspace_csv(ws->ws, path);
  if (!r) return fail(r);
  return ok();
}

int manip_workspace_write_xyz(const manip_workspace* ws, const char* path) {
  if (ws == nullptr) return fail_null("ws");
  if (path == nullptr) return fail_null("path");
  auto r = manip::write_workspace_xyz(ws->ws, path);
  if (!r) return fail(r);
  return ok();
}

int manip_image_load_pgm(const char* path, manip_image** out) {
  if (path == nullptr) return fail_null("path");
  if (out == nullptr) return fail_null("out");
  auto img = manip::load_pgm8(path);
  if (!img) return fail(img);
  *out = new manip_image{std::move(*img)};
  return ok();
}

void manip_image_free(manip_image* img) { delete img; }

int manip_image_size(const manip_image* img, int* out_w, int* out_h) {
  if (img == nullptr) return fail_null("img");
  if (out_w != nullptr) *out_w = img->img.width;
  if (out_h != nullptr) *out_h = img->img.height;
  return ok();
}

int manip_depth_load_pgm(const char* path, manip_depth** out) {
  if (path == nullptr) return fail_null("path");
  if (out == nullptr) return fail_null("out");
  auto map = manip::load_pgm16(path);
  if (!map) return fail(map);
  *out = new manip_depth{std::move(*map)};
  return ok();
}

void manip_depth_free(manip_depth* depth) { delete depth; }

int manip_detect(const manip_image* img, int max_keypoints, manip_features** out) {
  if (img == nullptr) return fail_null("img");
  if (out == nullptr) return fail_null("out");
  auto fs = manip::detect_and_describe(img->img, max_keypoints);
  if (!fs) return fail(fs);
  *out = new manip_features{std::move(*fs)};
  return ok();
}

void manip_features_free(manip_features* f) { delete f; }

int manip_features_count(const manip_features* f, int* out_count) {
  if (f == nullptr) return fail_null("features");
  if (out_count == nullptr) return fail_null("out_count");
  *out_count = static_cast<int>(f->fs.keypoints.size());
  return ok();
}

int manip_features_keypoint(const manip_features* f, int idx, double* out_u,
                            double* out_v, double* out_response,
                            double* out_orientation) {
  if (f == nullptr) return fail_null("features");
  if (idx < 0 || idx >= static_cast<int>(f->fs.keypoints.size())) {
    return fail(Status::InvalidArgument, "keypoint index out of range");
  }
  const manip::Keypoint& kp = f->fs.keypoints[static_cast<std::size_t>(idx)];
  if (out_u != nullptr) *out_u = kp.u;
  if (out_v != nullptr) *out_v = kp.v;
  if (out_response != nullptr) *out_response = kp.response;
  if (out_orientation != nullptr) *out_orientation = kp.orientation;
  return ok();
}

int manip_features_descriptor(const manip_features* f, int idx, uint64_t out_words[4]) {
  if (f == nullptr) return fail_null("features");
  if (out_words == nullptr) return fail_null("out_words");
  if (idx < 0 || idx >= static_cast<int>(f->fs.descriptors.size())) {
    return fail(Status::InvalidArgument, "descriptor index out of range");
  }
  const manip::Descriptor256& d = f->fs.descriptors[static_cast<std::size_t>(idx)];
  for (int i = 0; i < 4; ++i) out_words[i] = d.words[static_cast<std::size_t>(i)];
  return ok();
}

int manip_match(const manip_features* tmpl, const manip_features* frame, int method,
                double ratio, manip_matches** out) {
  if (tmpl == nullptr) return fail_null("tmpl");
  if (frame == nullptr) return fail_null("frame");
  if (out == nullptr) return fail_null("out");
  if (method != 0 && method != 1) {
    return fail(Status::InvalidArgument, "method must be 0 (brute) or 1 (kdtree)");
  }
  if (!(ratio > 0.0)) {
    return fail(Status::InvalidArgument, "ratio must be positive");
  }
  auto rated = method == 0
                   ? manip::hamming_two_nn(tmpl->fs.descriptors, frame->fs.descriptors)
                   : manip::kdtree_two_nn(tmpl->fs.descriptors, frame->fs.descriptors);
  if (!rated) return fail(rated);
  *out = new manip_matches{manip::ratio_filter(*rated, ratio)};
  return ok();
}

void manip_matches_free(manip_matches* m) { delete m; }

int manip_matches_count(const manip_matches* m, int* out_count, int* out_degenerate) {
  if (m == nullptr) return fail_null("matches");
  if (out_count != nullptr) *out_count = static_cast<int>(m->res.matches.size());
  if (out_degenerate != nullptr) *out_degenerate = m->res.degenerate_count;
  return ok();
}

int manip_matches_get(const manip_matches* m, int idx, int* out_template_idx,
                      int* out_frame_idx, double* out_distance) {
  if (m == nullptr) return fail_null("matches");
  if (idx < 0 || idx >= static_cast<int>(m->res.matches.size())) {
    return fail(Status::InvalidArgument, "match index out of range");
  }
  const manip::Match& match = m->res.matches[static_cast<std::size_t>(idx)];
  if (out_template_idx != nullptr) *out_template_idx = match.template_idx;
  if (out_frame_idx != nullptr) *out_frame_idx = match.frame_idx;
  if (out_distance != nullptr) *out_distance = match.distance;
  return ok();
}

int manip_estimate_homography(const double* corr, int n, double threshold_px,
                              int max_iters, int min_inliers, uint64_t seed,
                              double out_h[9], uint8_t* out_inlier_mask,
                              int* out_inlier_count, int* out_iterations,
                              double* out_mean_error_px) {
  if (corr == nullptr && n > 0) return fail_null("corr");
  if (n < 0) return fail(Status::InvalidArgument, "n cannot be negative");
  if (out_h == nullptr) return fail_null("out_h");
  std::vector<manip::Correspondence> cs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cs[static_cast<std::size_t>(i)] = {corr[i * 4 + 0], corr[i * 4 + 1],
                                       corr[i * 4 + 2], corr[i * 4 + 3]};
  }
  manip::RansacParams params;
  params.threshold_px = threshold_px;
  params.max_iters = max_iters;
  params.min_inliers = min_inliers;
  params.seed = seed;
  auto res = manip::estimate_homography_ransac(cs, params);
  if (!res) return fail(res);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out_h[r * 3 + c] = res->H(r, c);
  if (out_inlier_mask != nullptr) {
    for (int i = 0; i < n; ++i) {
      out_inlier_mask[i] = res->inlier_mask[static_cast<std::size_t>(i)] ? 1 : 0;
    }
  }
  if (out_inlier_count != nullptr) *out_inlier_count = res->inlier_count;
  if (out_iterations != nullptr) *out_iterations = res->iterations;
  if (out_mean_error_px != nullptr) *out_mean_error_px = res->mean_reprojection_error;
  return ok();
}

int manip_planar_pose(const double h[9], int template_w, int template_h,
                      double physical_width_m, const manip_depth* depth, double fx,
                      double fy, double cx, double cy, double depth_scale_m,
                      double out_position[3], double out_frame[9],
                      double out_euler_zyx[3], int* out_gimbal_lock) {
  if (h == nullptr) return fail_null("h");
  if (depth == nullptr) return fail_null("depth");
  if (out_position == nullptr) return fail_null("out_position");
  manip::Mat3 hm;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) hm(r, c) = h[r * 3 + c];
  manip::TemplateSpec tmpl;
  tmpl.w = template_w;
  tmpl.h = template_h;
  tmpl.physical_width = physical_width_m;
  manip::CameraModel cam;
  cam.fx = fx;
  cam.fy = fy;
  cam.cx = cx;
  cam.cy = cy;
  cam.depth_scale = depth_scale_m;
  auto pose = manip::planar_pose_from_observation(tmpl, hm, depth->map, cam);
  if (!pose) return fail(pose);
  for (int i = 0; i < 3; ++i) out_position[i] = pose->position(i);
  if (out_frame != nullptr) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out_frame[r * 3 + c] = pose->frame(r, c);
  }
  if (out_euler_zyx != nullptr) {
    euler_out(pose->euler, out_euler_zyx, out_gimbal_lock);
  } else if (out_gimbal_lock != nullptr) {
    *out_gimbal_lock = pose->euler.gimbal_lock ? 1 : 0;
  }
  return ok();
}

int manip_grasp_record(const double to[16], const double tb[16], double out_tg[16]) {
  if (to == nullptr) return fail_null("to");
  if (tb == nullptr) return fail_null("tb");
  if (out_tg == nullptr) return fail_null("out_tg");
  auto a = pose_from_array(to);
  if (!a) return fail(a);
  auto b = pose_from_array(tb);
  if (!b) return fail(b);
  pose_to_array(manip::record_grasp(*a, *b).tg, out_tg);
  return ok();
}

int manip_grasp_adapt(const double to_new[16], const double tg[16],
                      double out_pose[16]) {
  if (to_new == nullptr) return fail_null("to_new");
  if (tg == nullptr) return fail_null("tg");
  if (out_pose == nullptr) return fail_null("out_pose");
  auto a = pose_from_array(to_new);
  if (!a) return fail(a);
  auto g = pose_from_array(tg);
  if (!g) return fail(g);
  pose_to_array(manip::adapt_grasp(*a, manip::GraspRecord{*g}), out_pose);
  return ok();
}

int manip_grasp_angles(const double pose[16], double out_zyx[3], int* out_gimbal_lock) {
  return manip_euler_from_pose(pose, out_zyx, out_gimbal_lock);
}

int manip_euler_from_pose(const double pose[16], double out_zyx[3],
                          int* out_gimbal_lock) {
  if (pose == nullptr) return fail_null("pose");
  if (out_zyx == nullptr) return fail_null("out_zyx");
  auto t = pose_from_array(pose);
  if (!t) return fail(t);
  euler_out(manip::euler_from_rotation(t->R), out_zyx, out_gimbal_lock);
  return ok();
}

int manip_simulate(const char* scene_path, const char* robot_path, int has_seed,
                   uint64_t seed, int has_threshold, double threshold_cm,
                   int has_trials, int trials, int include_timing, char** out_json) {
  if (scene_path == nullptr) return fail_null("scene_path");
  if (out_json == nullptr) return fail_null("out_json");
  auto scene = manip::load_scene(scene_path);
  if (!scene) return fail(scene);
  manip::RobotConfig robot;
  if (robot_path != nullptr) {
    auto loaded = manip::load_robot(robot_path);
    if (!loaded) return fail(loaded);
    robot = *loaded;
  } else {
    robot = manip::default_robot();
  }
  manip::PipelineOverrides overrides;
  if (has_seed != 0) overrides.seed = seed;
  if (has_threshold != 0) overrides.threshold_cm = threshold_cm;
  if (has_trials != 0) overrides.trials = trials;
  overrides.include_timing = include_timing != 0;
  auto report = manip::run_pipeline(*scene, robot, overrides);
  if (!report) return fail(report);
  const std::string text = report->to_json().dump(2) + "\n";
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (buf == nullptr) return fail(Status::Internal, "out of memory");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  *out_json = buf;
  return ok();
}

void manip_string_free(char* s) { std::free(s); }

}  // extern "C"
