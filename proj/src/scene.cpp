#include "manip/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "manip/rng.hpp"

namespace manip {

namespace {

constexpr double kKeypointMargin = 4.0;  // px

Result<double> get_num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return Result<double>::success(fallback);
  if (!j.at(key).is_number()) {
    return Result<double>::failure(Status::Parse,
                                   std::string(key) + " must be a number");
  }
  return Result<double>::success(j.at(key).get<double>());
}

}  // namespace

std::vector<Eigen::Vector2d> template_keypoints(const SceneSpec& scene) {
  Rng rng(scene.keypoint_seed);
  std::vector<Eigen::Vector2d> kps;
  kps.reserve(static_cast<std::size_t>(scene.keypoint_count));
  const double u_hi = static_cast<double>(scene.template_w) - kKeypointMargin;
  const double v_hi = static_cast<double>(scene.template_h) - kKeypointMargin;
  for (int i = 0; i < scene.keypoint_count; ++i) {
    const double u = rng.uniform(kKeypointMargin, u_hi);
    const double v = rng.uniform(kKeypointMargin, v_hi);
    kps.emplace_back(u, v);
  }
  return kps;
}

RigidTransform trajectory_pose(const SceneSpec& scene, double t) {
  const auto& keys = scene.trajectory;
  if (keys.empty()) return RigidTransform{};
  if (t <= keys.front().t || keys.size() == 1) return keys.front().pose;
  if (t >= keys.back().t) return keys.back().pose;
  std::size_t hi = 1;
  while (keys[hi].t < t) ++hi;
  const TrajectoryKey& a = keys[hi - 1];
  const TrajectoryKey& b = keys[hi];
  const double span = b.t - a.t;
  const double s = span > 0.0 ? (t - a.t) / span : 0.0;
  RigidTransform pose;
  pose.t = (1.0 - s) * a.pose.t + s * b.pose.t;
  pose.R = (s <= 0.5) ? a.pose.R : b.pose.R;
  return pose;
}

TemplateSpec template_spec(const SceneSpec& scene) {
  TemplateSpec t;
  t.w = scene.template_w;
  t.h = scene.template_h;
  t.physical_width = scene.physical_width;
  return t;
}

Result<FrameObservation> synth_frame(const SceneSpec& scene, double t,
                                     std::uint64_t noise_seed) {
  if (scene.trajectory.empty()) {
    return Result<FrameObservation>::failure(Status::InvalidArgument,
                                             "scene has no trajectory keys");
  }
  const RigidTransform pose = trajectory_pose(scene, t);
  if (pose.t.z() <= 1e-9) {
    return Result<FrameObservation>::failure(
        Status::InvalidArgument, "object plane center behind camera");
  }

  bool occluded = false;
  for (const auto& span : scene.occlusion_spans) {
    if (t >= span.first && t <= span.second) {
      occluded = true;
      break;
    }
  }

  FrameObservation obs;
  obs.timestamp = t;
  obs.gt_pose = pose;
  obs.gt_present = !occluded;

  Rng rng(noise_seed);
  const CameraModel& cam = scene.camera;
  const double s = scene.physical_width / static_cast<double>(scene.template_w);
  const double half_w = 0.5 * scene.physical_width;
  const double half_h = 0.5 * static_cast<double>(scene.template_h) * s;

  // Correspondences: project each template keypoint through the pose; points
  // behind the camera or outside the frame produce no match.
  const std::vector<Eigen::Vector2d> kps = template_keypoints(scene);
  for (const Eigen::Vector2d& kp : kps) {
    const Vec3 obj((kp.x() - 0.5 * scene.template_w) * s,
                   (0.5 * scene.template_h - kp.y()) * s, 0.0);
    const Vec3 pc = pose.R * obj + pose.t;
    if (pc.z() <= 1e-6) continue;
    double uf = cam.fx * pc.x() / pc.z() + cam.cx;
    double vf = cam.fy * pc.y() / pc.z() + cam.cy;
    if (uf < 0.0 || uf >= static_cast<double>(scene.image_w) || vf < 0.0 ||
        vf >= static_cast<double>(scene.image_h)) {
      continue;
    }
    if (scene.pixel_noise_px > 0.0) {
      uf += rng.gaussian() * scene.pixel_noise_px;
      vf += rng.gaussian() * scene.pixel_noise_px;
    }
    obs.correspondences.push_back({kp.x(), kp.y(), uf, vf});
  }

  const std::size_t m = obs.correspondences.size();
  if (occluded) {
    // The matcher sees only clutter: every match lands on a random pixel.
    for (Correspondence& c : obs.correspondences) {
      c.uf = rng.uniform(0.0, static_cast<double>(scene.image_w));
      c.vf = rng.uniform(0.0, static_cast<double>(scene.image_h));
    }
  } else if (scene.outlier_rate > 0.0 && m > 0) {
    const std::size_t n_out = static_cast<std::size_t>(
        std::llround(scene.outlier_rate * static_cast<double>(m)));
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_out && i < m; ++i) {
      const std::size_t j = i + rng.index(m - i);
      std::swap(order[i], order[j]);
      Correspondence& c = obs.correspondences[order[i]];
      c.uf = rng.uniform(0.0, static_cast<double>(scene.image_w));
      c.vf = rng.uniform(0.0, static_cast<double>(scene.image_h));
    }
  }

  // Depth: exact ray/plane intersection inside the object rectangle, flat
  // background elsewhere, then per-pixel noise, holes, and quantization.
  obs.depth.width = scene.image_w;
  obs.depth.height = scene.image_h;
  obs.depth.data.assign(
      static_cast<std::size_t>(scene.image_w) * scene.image_h, 0);
  const Vec3 k = pose.R.col(2);
  const double offset = pose.t.dot(k);
  const Mat3 r_t = pose.R.transpose();
  for (int v = 0; v < scene.image_h; ++v) {
    for (int u = 0; u < scene.image_w; ++u) {
      const Vec3 ray((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
      double z = scene.background_depth;
      const double denom = ray.dot(k);
      if (std::abs(denom) > 1e-9) {
        const double z_plane = offset / denom;
        if (z_plane > 0.0 && (scene.background_depth <= 0.0 ||
                              z_plane < scene.background_depth)) {
          const Vec3 rel = r_t * (z_plane * ray - pose.t);
          // Grown by ~3 px of plane footprint so the bilinear stencil of an
          // edge reference point stays on object depth even when estimation
          // noise displaces the point by a couple of pixels.
          const double pad = 3.0 * z_plane / std::min(cam.fx, cam.fy);
          if (std::abs(rel.x()) <= half_w + pad &&
              std::abs(rel.y()) <= half_h + pad) {
            z = z_plane;
          }
        }
      }
      if (scene.depth_noise_m > 0.0) z += rng.gaussian() * scene.depth_noise_m;
      if (scene.depth_hole_rate > 0.0 &&
          rng.uniform() < scene.depth_hole_rate) {
        continue;  // hole stays 0 (invalid)
      }
      if (z <= 0.0) continue;
      const long long q = std::llround(z / cam.depth_scale);
      obs.depth.data[static_cast<std::size_t>(v) * scene.image_w + u] =
          static_cast<std::uint16_t>(std::clamp<long long>(q, 0, 65535));
    }
  }

  return Result<FrameObservation>::success(std::move(obs));
}

Result<SceneSpec> scene_from_json(const Json& j) {
  if (!j.is_object()) {
    return Result<SceneSpec>::failure(Status::Parse,
                                      "scene must be a JSON object");
  }
  SceneSpec scene;

  if (j.contains("template")) {
    const Json& tj = j.at("template");
    if (!tj.is_object()) {
      return Result<SceneSpec>::failure(Status::Parse,
                                        "template must be an object");
    }
    auto w = get_num(tj, "width_px", scene.template_w);
    auto h = get_num(tj, "height_px", scene.template_h);
    auto pw = get_num(tj, "physical_width_m", scene.physical_width);
    auto kc = get_num(tj, "keypoint_count", scene.keypoint_count);
    auto ks = get_num(tj, "keypoint_seed", static_cast<double>(scene.keypoint_seed));
    for (const auto* r : {&w, &h, &pw, &kc, &ks}) {
      if (!*r) return Result<SceneSpec>::failure(r->status, r->message);
    }
    scene.template_w = static_cast<int>(*w);
    scene.template_h = static_cast<int>(*h);
    scene.physical_width = *pw;
    scene.keypoint_count = static_cast<int>(*kc);
    scene.keypoint_seed = static_cast<std::uint64_t>(*ks);
  }
  if (scene.template_w <= 0 || scene.template_h <= 0 ||
      scene.physical_width <= 0.0 || scene.keypoint_count <= 0) {
    return Result<SceneSpec>::failure(
        Status::InvalidArgument,
        "template dimensions, physical width, and keypoint count must be positive");
  }

  if (j.contains("camera")) {
    const Json& cj = j.at("camera");
    if (!cj.is_object()) {
      return Result<SceneSpec>::failure(Status::Parse,
                                        "camera must be an object");
    }
    auto fx = get_num(cj, "fx", scene.camera.fx);
    auto fy = get_num(cj, "fy", scene.camera.fy);
    auto cx = get_num(cj, "cx", scene.camera.cx);
    auto cy = get_num(cj, "cy", scene.camera.cy);
    auto ds = get_num(cj, "depth_scale_m", scene.camera.depth_scale);
    auto iw = get_num(cj, "width_px", scene.image_w);
    auto ih = get_num(cj, "height_px", scene.image_h);
    for (const auto* r : {&fx, &fy, &cx, &cy, &ds, &iw, &ih}) {
      if (!*r) return Result<SceneSpec>::failure(r->status, r->message);
    }
    scene.camera.fx = *fx;
    scene.camera.fy = *fy;
    scene.camera.cx = *cx;
    scene.camera.cy = *cy;
    scene.camera.depth_scale = *ds;
    scene.image_w = static_cast<int>(*iw);
    scene.image_h = static_cast<int>(*ih);
  }
  if (scene.camera.fx <= 0.0 || scene.camera.fy <= 0.0 ||
      scene.camera.depth_scale <= 0.0 || scene.image_w <= 0 ||
      scene.image_h <= 0) {
    return Result<SceneSpec>::failure(
        Status::InvalidArgument,
        "camera focal lengths, depth scale, and image size must be positive");
  }

  if (!j.contains("trajectory") || !j.at("trajectory").is_array() ||
      j.at("trajectory").empty()) {
    return Result<SceneSpec>::failure(
        Status::Parse, "trajectory must be a non-empty array of keys");
  }
  for (const Json& kj : j.at("trajectory")) {
    if (!kj.is_object() || !kj.contains("t") || !kj.at("t").is_number() ||
        !kj.contains("pose")) {
      return Result<SceneSpec>::failure(
          Status::Parse, "trajectory keys need numeric 't' and a 'pose'");
    }
    TrajectoryKey key;
    key.t = kj.at("t").get<double>();
    auto pose = transform_from_json(kj.at("pose"));
    if (!pose) {
      return Result<SceneSpec>::failure(pose.status,
                                        "trajectory pose: " + pose.message);
    }
    key.pose = *pose;
    if (!scene.trajectory.empty() && key.t <= scene.trajectory.back().t) {
      return Result<SceneSpec>::failure(
          Status::InvalidArgument, "trajectory times must strictly increase");
    }
    scene.trajectory.push_back(key);
  }

  auto rate = get_num(j, "frame_rate_hz", scene.frame_rate);
  auto pn = get_num(j, "pixel_noise_px", scene.pixel_noise_px);
  auto orate = get_num(j, "outlier_rate", scene.outlier_rate);
  auto dn = get_num(j, "depth_noise_m", scene.depth_noise_m);
  auto hr = get_num(j, "depth_hole_rate", scene.depth_hole_rate);
  auto bg = get_num(j, "background_depth_m", scene.background_depth);
  auto seed = get_num(j, "seed", static_cast<double>(scene.seed));
  auto trials = get_num(j, "trials", scene.trials);
  for (const auto* r : {&rate, &pn, &orate, &dn, &hr, &bg, &seed, &trials}) {
    if (!*r) return Result<SceneSpec>::failure(r->status, r->message);
  }
  scene.frame_rate = *rate;
  scene.pixel_noise_px = *pn;
  scene.outlier_rate = *orate;
  scene.depth_noise_m = *dn;
  scene.depth_hole_rate = *hr;
  scene.background_depth = *bg;
  scene.seed = static_cast<std::uint64_t>(*seed);
  scene.trials = static_cast<int>(*trials);

  if (scene.frame_rate <= 0.0) {
    return Result<SceneSpec>::failure(Status::InvalidArgument,
                                      "frame_rate_hz must be positive");
  }
  if (scene.pixel_noise_px < 0.0 || scene.depth_noise_m < 0.0) {
    return Result<SceneSpec>::failure(Status::InvalidArgument,
                                      "noise levels cannot be negative");
  }
  if (scene.outlier_rate < 0.0 || scene.outlier_rate >= 1.0 ||
      scene.depth_hole_rate < 0.0 || scene.depth_hole_rate >= 1.0) {
    return Result<SceneSpec>::failure(Status::InvalidArgument,
                                      "rates must lie in [0, 1)");
  }
  if (scene.trials < 1) {
    return Result<SceneSpec>::failure(Status::InvalidArgument,
                                      "trials must be at least 1");
  }

  if (j.contains("occlusion_spans")) {
    const Json& spans = j.at("occlusion_spans");
    if (!spans.is_array()) {
      return Result<SceneSpec>::failure(
          Status::Parse, "occlusion_spans must be an array of [t0, t1] pairs");
    }
    for (const Json& sj : spans) {
      if (!sj.is_array() || sj.size() != 2 || !sj[0].is_number() ||
          !sj[1].is_number()) {
        return Result<SceneSpec>::failure(
            Status::Parse, "occlusion spans must be numeric [t0, t1] pairs");
      }
      const double a = sj[0].get<double>();
      const double b = sj[1].get<double>();
      if (b < a) {
        return Result<SceneSpec>::failure(Status::InvalidArgument,
                                          "occlusion span with t1 < t0");
      }
      scene.occlusion_spans.emplace_back(a, b);
    }
  }

  return Result<SceneSpec>::success(std::move(scene));
}

Result<SceneSpec> load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return Result<SceneSpec>::failure(Status::Io, "cannot open scene " + path);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    return Result<SceneSpec>::failure(Status::Parse, "invalid JSON in " + path);
  }
  return scene_from_json(j);
}

}  // namespace manip
