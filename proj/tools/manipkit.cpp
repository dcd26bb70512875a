// manipkit: command-line front end over the manip C API. Every kinematic,
// vision, and simulation operation goes through the shared library; the tool
// itself only parses arguments, reads small JSON/CSV inputs, and formats
// output. Exit codes: 0 success, 1 domain failure (no IK branch, no RANSAC
// consensus, invalid depth, ...), 2 usage/config/IO errors.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manip/capi.h"

namespace {

using Json = nlohmann::ordered_json;

int exit_code_for(int status) {
  switch (status) {
    case MANIP_E_UNREACHABLE:
    case MANIP_E_NO_CONSENSUS:
    case MANIP_E_TOO_FEW_CORRESPONDENCES:
    case MANIP_E_INVALID_DEPTH:
    case MANIP_E_DEGENERATE_BASIS:
    case MANIP_E_POINT_AT_INFINITY:
      return 1;
    default:
      return 2;
  }
}

[[noreturn]] void die(int status) {
  std::fprintf(stderr, "%s: %s\n", manip_status_name(status), manip_last_error());
  std::exit(exit_code_for(status));
}

[[noreturn]] void die_usage(const std::string& msg) {
  std::fprintf(stderr, "E_INVALID_ARGUMENT: %s\n", msg.c_str());
  std::exit(2);
}

[[noreturn]] void die_parse(const std::string& msg) {
  std::fprintf(stderr, "E_PARSE: %s\n", msg.c_str());
  std::exit(2);
}

void check(int status) {
  if (status != MANIP_OK) die(status);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "E_IO: cannot open %s\n", path.c_str());
    std::exit(2);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) die_parse("invalid JSON in " + path);
  return j;
}

// {"r": [9 row-major], "t": [3]} -> row-major 4x4.
void pose_from_json(const Json& j, const std::string& what, double out[16]) {
  if (!j.is_object() || !j.contains("r") || !j.contains("t") ||
      !j.at("r").is_array() || j.at("r").size() != 9 || !j.at("t").is_array() ||
      j.at("t").size() != 3) {
    die_parse(what + " must be {\"r\": [9 numbers], \"t\": [3 numbers]}");
  }
  for (int i = 0; i < 16; ++i) out[i] = 0.0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out[r * 4 + c] = j.at("r")[static_cast<std::size_t>(r * 3 + c)].get<double>();
    }
    out[r * 4 + 3] = j.at("t")[static_cast<std::size_t>(r)].get<double>();
  }
  out[15] = 1.0;
}

Json pose_to_json(const double p[16]) {
  Json j;
  Json r = Json::array();
  Json t = Json::array();
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) r.push_back(p[row * 4 + col]);
    t.push_back(p[row * 4 + 3]);
  }
  j["r"] = r;
  j["t"] = t;
  return j;
}

Json euler_to_json(const double zyx[3], int gimbal) {
  Json j;
  j["yaw"] = zyx[0];
  j["pitch"] = zyx[1];
  j["roll"] = zyx[2];
  j["gimbal_lock"] = gimbal != 0;
  return j;
}

manip_robot* acquire_robot(const std::string& path) {
  manip_robot* robot = nullptr;
  if (path.empty()) {
    check(manip_robot_default(&robot));
  } else {
    check(manip_robot_load(path.c_str(), &robot));
  }
  return robot;
}

void emit(const Json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::fprintf(stderr, "E_IO: cannot write %s\n", out_path.c_str());
      std::exit(2);
    }
    out << text;
  }
  std::fputs(text.c_str(), stdout);
}

std::vector<double> read_correspondence_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "E_IO: cannot open %s\n", path.c_str());
    std::exit(2);
  }
  std::vector<double> flat;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    double ut, vt, uf, vf;
    if (std::sscanf(line.c_str(), " %lf , %lf , %lf , %lf", &ut, &vt, &uf, &vf) != 4) {
      die_parse(path + ":" + std::to_string(line_no) +
                ": expected 'ut,vt,uf,vf'");
    }
    flat.push_back(ut);
    flat.push_back(vt);
    flat.push_back(uf);
    flat.push_back(vf);
  }
  return flat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile manipulation toolkit: kinematics, features, planar pose, "
               "grasp transforms, and the synthetic track-and-grasp simulator"};
  app.require_subcommand(1);

  std::string robot_path;
  app.add_option("--robot", robot_path, "Robot config JSON (default: built-in)")
      ->configurable(false);

  // fk
  auto* fk_cmd = app.add_subcommand("fk", "Forward kinematics for a joint vector");
  std::vector<double> fk_q;
  std::string fk_out;
  fk_cmd->add_option("--q", fk_q, "Six joint angles, rad")
      ->delimiter(',')
      ->expected(6)
      ->required();
  fk_cmd->add_option("--out", fk_out, "Also write the JSON result here");

  // ik
  auto* ik_cmd = app.add_subcommand("ik", "Closed-form inverse kinematics");
  std::string ik_pose_file, ik_out;
  std::vector<double> ik_t, ik_r, ik_ref;
  double ik_theta6_ref = 0.0;
  ik_cmd->add_option("--pose-file", ik_pose_file,
                     "Target pose JSON file {\"r\":[9],\"t\":[3]}");
  ik_cmd->add_option("--t", ik_t, "Target translation x,y,z (with --r)")
      ->delimiter(',')
      ->expected(3);
  ik_cmd->add_option("--r", ik_r, "Target rotation, 9 row-major values (with --t)")
      ->delimiter(',')
      ->expected(9);
  ik_cmd->add_option("--theta6-ref", ik_theta6_ref,
                     "theta6 used at the wrist singularity");
  ik_cmd->add_option("--select", ik_ref,
                     "Also pick the branch nearest this reference config")
      ->delimiter(',')
      ->expected(6);
  ik_cmd->add_option("--out", ik_out, "Also write the JSON result here");

  // workspace
  auto* ws_cmd = app.add_subcommand("workspace", "Monte-Carlo reachability analysis");
  std::uint64_t ws_samples = 100000;
  std::uint64_t ws_seed = 0;
  std::string ws_csv, ws_xyz, ws_out;
  ws_cmd->add_option("--samples", ws_samples, "Joint-space samples");
  ws_cmd->add_option("--seed", ws_seed, "RNG seed");
  ws_cmd->add_option("--out-csv", ws_csv, "Write sampled positions as CSV");
  ws_cmd->add_option("--out-xyz", ws_xyz, "Write sampled positions as XYZ");
  ws_cmd->add_option("--out", ws_out, "Also write the JSON stats here");

  // base-wheels
  auto* base_cmd =
      app.add_subcommand("base-wheels", "Omni-base wheel/body velocity mapping");
  std::vector<double> base_body, base_wheels;
  std::string base_out;
  base_cmd->add_option("--body", base_body, "Body velocity vx,vy,omega -> wheels")
      ->delimiter(',')
      ->expected(3);
  base_cmd->add_option("--wheels", base_wheels,
                       "Wheel speeds w1,w2,w3,w4 -> body velocity")
      ->delimiter(',')
      ->expected(4);
  base_cmd->add_option("--out", base_out, "Also write the JSON result here");

  // match
  auto* match_cmd =
      app.add_subcommand("match", "Detect features in two images and match them");
  std::string match_template, match_frame, match_method = "brute", match_out;
  int match_max_kp = 500;
  double match_ratio = 0.7;
  match_cmd->add_option("--template", match_template, "Template image (PGM)")
      ->required();
  match_cmd->add_option("--frame", match_frame, "Frame image (PGM)")->required();
  match_cmd->add_option("--max-keypoints", match_max_kp, "Keypoint budget per image");
  match_cmd->add_option("--method", match_method, "brute | kdtree")
      ->check(CLI::IsMember({"brute", "kdtree"}));
  match_cmd->add_option("--ratio", match_ratio, "Lowe ratio threshold");
  match_cmd->add_option("--out", match_out, "Also write the JSON result here");

  // estimate-pose
  auto* pose_cmd = app.add_subcommand(
      "estimate-pose", "RANSAC homography and, with depth, the planar pose");
  std::string pose_corr, pose_template_json, pose_camera_json, pose_depth, pose_out;
  double pose_threshold = 3.0;
  int pose_max_iters = 1000, pose_min_inliers = 10;
  std::uint64_t pose_seed = 0;
  pose_cmd->add_option("--corr", pose_corr, "Correspondence CSV: ut,vt,uf,vf per line")
      ->required();
  pose_cmd->add_option("--template-json", pose_template_json,
                       "Template JSON {width_px, height_px, physical_width_m}");
  pose_cmd->add_option("--camera-json", pose_camera_json,
                       "Camera JSON {fx, fy, cx, cy, depth_scale_m}");
  pose_cmd->add_option("--depth", pose_depth, "Depth map (16-bit PGM)");
  pose_cmd->add_option("--threshold-px", pose_threshold, "Inlier threshold, px");
  pose_cmd->add_option("--max-iters", pose_max_iters, "RANSAC iteration cap");
  pose_cmd->add_option("--min-inliers", pose_min_inliers, "Consensus floor");
  pose_cmd->add_option("--seed", pose_seed, "RANSAC seed");
  pose_cmd->add_option("--out", pose_out, "Also write the JSON result here");

  // grasp-adapt
  auto* grasp_cmd = app.add_subcommand(
      "grasp-adapt", "Record a grasp transform and re-target it to a new pose");
  std::string grasp_to, grasp_tb, grasp_tg, grasp_to_new, grasp_out;
  grasp_cmd->add_option("--to", grasp_to, "Object pose at demonstration (JSON)");
  grasp_cmd->add_option("--tb", grasp_tb, "Gripper pose at demonstration (JSON)");
  grasp_cmd->add_option("--tg", grasp_tg, "Previously recorded grasp transform (JSON)");
  grasp_cmd->add_option("--to-new", grasp_to_new, "New object pose (JSON)");
  grasp_cmd->add_option("--out", grasp_out, "Also write the JSON result here");

  // simulate
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Run the synthetic track-and-grasp pipeline on a scene");
  std::string sim_scene, sim_out;
  std::optional<std::uint64_t> sim_seed;
  std::optional<double> sim_threshold;
  std::optional<int> sim_trials;
  bool sim_timing = false;
  sim_cmd->add_option("--scene", sim_scene, "Scene spec JSON")->required();
  sim_cmd->add_option("--seed", sim_seed, "Override the scene seed");
  sim_cmd->add_option("--threshold-cm", sim_threshold,
                      "Tracking-accuracy threshold, cm (default 2)");
  sim_cmd->add_option("--trials", sim_trials, "Override the scene trial count");
  sim_cmd->add_flag("--timing", sim_timing,
                    "Include wall-clock latency/throughput (non-reproducible)");
  sim_cmd->add_option("--out", sim_out, "Also write the report JSON here");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "Pretty-print a metrics report JSON");
  std::string report_path;
  report_cmd->add_option("--metrics", report_path, "Report JSON from simulate")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "E_INVALID_ARGUMENT: %s\n", e.what());
    return 2;
  }

  if (*fk_cmd) {
    manip_robot* robot = acquire_robot(robot_path);
    double pose[16], zyx[3];
    int gimbal = 0;
    check(manip_fk(robot, fk_q.data(), pose));
    check(manip_euler_from_pose(pose, zyx, &gimbal));
    Json j;
    j["pose"] = pose_to_json(pose);
    j["euler"] = euler_to_json(zyx, gimbal);
    emit(j, fk_out);
    manip_robot_free(robot);
    return 0;
  }

  if (*ik_cmd) {
    double pose[16];
    if (!ik_pose_file.empty()) {
      pose_from_json(load_json_file(ik_pose_file), "pose", pose);
    } else if (!ik_t.empty() && !ik_r.empty()) {
      Json j;
      j["r"] = ik_r;
      j["t"] = ik_t;
      pose_from_json(j, "pose", pose);
    } else {
      die_usage("ik needs --pose-file or both --t and --r");
    }
    manip_robot* robot = acquire_robot(robot_path);
    double q[48], zyx_sel[6];
    uint8_t near_singular[8];
    int count = 0;
    check(manip_ik(robot, pose, ik_theta6_ref, q, near_singular, &count));
    Json j;
    j["count"] = count;
    Json sols = Json::array();
    for (int s = 0; s < count; ++s) {
      Json sol;
      Json qs = Json::array();
      for (int i = 0; i < 6; ++i) qs.push_back(q[s * 6 + i]);
      sol["q"] = qs;
      sol["near_singular"] = near_singular[s] != 0;
      sols.push_back(sol);
    }
    j["solutions"] = sols;
    if (!ik_ref.empty()) {
      check(manip_ik_select(robot, pose, ik_ref.data(), zyx_sel));
      Json sel = Json::array();
      for (int i = 0; i < 6; ++i) sel.push_back(zyx_sel[i]);
      j["selected"] = sel;
    }
    emit(j, ik_out);
    manip_robot_free(robot);
    return 0;
  }

  if (*ws_cmd) {
    manip_robot* robot = acquire_robot(robot_path);
    manip_workspace* ws = nullptr;
    check(manip_workspace_sample(robot, ws_samples, ws_seed, &ws));
    uint64_t n = 0;
    double max_reach = 0.0, volume = 0.0;
    check(manip_workspace_stats(ws, &n, &max_reach, &volume));
    if (!ws_csv.empty()) check(manip_workspace_write_csv(ws, ws_csv.c_str()));
    if (!ws_xyz.empty()) check(manip_workspace_write_xyz(ws, ws_xyz.c_str()));
    Json j;
    j["samples"] = n;
    j["seed"] = ws_seed;
    j["max_reach_m"] = max_reach;
    j["volume_m3"] = volume;
    emit(j, ws_out);
    manip_workspace_free(ws);
    manip_robot_free(robot);
    return 0;
  }

  if (*base_cmd) {
    if (base_body.empty() == base_wheels.empty()) {
      die_usage("base-wheels needs exactly one of --body or --wheels");
    }
    manip_robot* robot = acquire_robot(robot_path);
    Json j;
    if (!base_body.empty()) {
      double w[4];
      check(manip_base_wheel_speeds(robot, base_body[0], base_body[1], base_body[2], w));
      j["wheel_speeds"] = Json::array({w[0], w[1], w[2], w[3]});
    } else {
      double v[3], residual = 0.0;
      check(manip_base_body_velocity(robot, base_wheels.data(), v, &residual));
      Json body;
      body["vx"] = v[0];
      body["vy"] = v[1];
      body["omega"] = v[2];
      j["body"] = body;
      j["residual"] = residual;
    }
    emit(j, base_out);
    manip_robot_free(robot);
    return 0;
  }

  if (*match_cmd) {
    manip_image* tmpl_img = nullptr;
    manip_image* frame_img = nullptr;
    check(manip_image_load_pgm(match_template.c_str(), &tmpl_img));
    check(manip_image_load_pgm(match_frame.c_str(), &frame_img));
    manip_features* tf = nullptr;
    manip_features* ff = nullptr;
    check(manip_detect(tmpl_img, match_max_kp, &tf));
    check(manip_detect(frame_img, match_max_kp, &ff));
    manip_matches* mm = nullptr;
    check(manip_match(tf, ff, match_method == "kdtree" ? 1 : 0, match_ratio, &mm));
    int tn = 0, fn = 0, n = 0, degenerate = 0;
    check(manip_features_count(tf, &tn));
    check(manip_features_count(ff, &fn));
    check(manip_matches_count(mm, &n, &degenerate));
    Json j;
    j["template_keypoints"] = tn;
    j["frame_keypoints"] = fn;
    j["method"] = match_method;
    j["ratio"] = match_ratio;
    j["matches"] = n;
    j["degenerate"] = degenerate;
    Json pairs = Json::array();
    for (int i = 0; i < n; ++i) {
      int ti = 0, fi = 0;
      double dist = 0.0;
      check(manip_matches_get(mm, i, &ti, &fi, &dist));
      pairs.push_back(Json::array({ti, fi, dist}));
    }
    j["pairs"] = pairs;
    emit(j, match_out);
    manip_matches_free(mm);
    manip_features_free(ff);
    manip_features_free(tf);
    manip_image_free(frame_img);
    manip_image_free(tmpl_img);
    return 0;
  }

  if (*pose_cmd) {
    const std::vector<double> flat = read_correspondence_csv(pose_corr);
    const int n = static_cast<int>(flat.size() / 4);
    std::vector<uint8_t> mask(static_cast<std::size_t>(n > 0 ? n : 1), 0);
    double h[9];
    int inliers = 0, iters = 0;
    double mean_err = 0.0;
    check(manip_estimate_homography(flat.data(), n, pose_threshold, pose_max_iters,
                                    pose_min_inliers, pose_seed, h, mask.data(),
                                    &inliers, &iters, &mean_err));
    Json j;
    j["h"] = std::vector<double>(h, h + 9);
    j["inlier_count"] = inliers;
    j["iterations"] = iters;
    j["mean_reprojection_error_px"] = mean_err;
    Json mask_json = Json::array();
    for (int i = 0; i < n; ++i) mask_json.push_back(mask[static_cast<std::size_t>(i)]);
    j["inlier_mask"] = mask_json;

    const bool want_pose = !pose_depth.empty() || !pose_template_json.empty() ||
                           !pose_camera_json.empty();
    if (want_pose) {
      if (pose_depth.empty() || pose_template_json.empty() || pose_camera_json.empty()) {
        die_usage(
            "pose recovery needs --depth, --template-json, and --camera-json together");
      }
      const Json tj = load_json_file(pose_template_json);
      const Json cj = load_json_file(pose_camera_json);
      for (const char* key : {"width_px", "height_px", "physical_width_m"}) {
        if (!tj.contains(key) || !tj.at(key).is_number()) {
          die_parse(std::string("template JSON needs numeric '") + key + "'");
        }
      }
      for (const char* key : {"fx", "fy", "cx", "cy", "depth_scale_m"}) {
        if (!cj.contains(key) || !cj.at(key).is_number()) {
          die_parse(std::string("camera JSON needs numeric '") + key + "'");
        }
      }
      manip_depth* depth = nullptr;
      check(manip_depth_load_pgm(pose_depth.c_str(), &depth));
      double position[3], frame[9], zyx[3];
      int gimbal = 0;
      check(manip_planar_pose(
          h, tj.at("width_px").get<int>(), tj.at("height_px").get<int>(),
          tj.at("physical_width_m").get<double>(), depth, cj.at("fx").get<double>(),
          cj.at("fy").get<double>(), cj.at("cx").get<double>(),
          cj.at("cy").get<double>(), cj.at("depth_scale_m").get<double>(), position,
          frame, zyx, &gimbal));
      Json pj;
      pj["position"] = std::vector<double>(position, position + 3);
      pj["frame"] = std::vector<double>(frame, frame + 9);
      pj["euler"] = euler_to_json(zyx, gimbal);
      j["pose"] = pj;
      manip_depth_free(depth);
    }
    emit(j, pose_out);
    return 0;
  }

  if (*grasp_cmd) {
    const bool can_record = !grasp_to.empty() && !grasp_tb.empty();
    double tg[16];
    bool have_tg = false;
    Json j;
    if (can_record) {
      double to[16], tb[16];
      pose_from_json(load_json_file(grasp_to), "--to", to);
      pose_from_json(load_json_file(grasp_tb), "--tb", tb);
      check(manip_grasp_record(to, tb, tg));
      j["tg"] = pose_to_json(tg);
      have_tg = true;
    } else if (!grasp_tg.empty()) {
      pose_from_json(load_json_file(grasp_tg), "--tg", tg);
      have_tg = true;
    }
    if (!have_tg) {
      die_usage("grasp-adapt needs --to with --tb, or a recorded --tg");
    }
    if (!grasp_to_new.empty()) {
      double to_new[16], adapted[16], zyx[3];
      int gimbal = 0;
      pose_from_json(load_json_file(grasp_to_new), "--to-new", to_new);
      check(manip_grasp_adapt(to_new, tg, adapted));
      check(manip_grasp_angles(adapted, zyx, &gimbal));
      j["adapted"] = pose_to_json(adapted);
      j["euler"] = euler_to_json(zyx, gimbal);
    }
    emit(j, grasp_out);
    return 0;
  }

  if (*sim_cmd) {
    char* out_json = nullptr;
    check(manip_simulate(
        sim_scene.c_str(), robot_path.empty() ? nullptr : robot_path.c_str(),
        sim_seed.has_value() ? 1 : 0, sim_seed.value_or(0),
        sim_threshold.has_value() ? 1 : 0, sim_threshold.value_or(0.0),
        sim_trials.has_value() ? 1 : 0, sim_trials.value_or(0),
        sim_timing ? 1 : 0, &out_json));
    if (!sim_out.empty()) {
      std::ofstream out(sim_out);
      if (!out) {
        std::fprintf(stderr, "E_IO: cannot write %s\n", sim_out.c_str());
        manip_string_free(out_json);
        return 2;
      }
      out << out_json;
    }
    std::fputs(out_json, stdout);
    manip_string_free(out_json);
    return 0;
  }

  if (*report_cmd) {
    const Json j = load_json_file(report_path);
    if (!j.is_object()) die_parse("metrics report must be a JSON object");
    std::size_t width = 0;
    for (const auto& item : j.items()) width = std::max(width, item.key().size());
    for (const auto& item : j.items()) {
      std::ostringstream value;
      value << item.value();
      std::printf("%-*s  %s\n", static_cast<int>(width), item.key().c_str(),
                  value.str().c_str());
    }
    return 0;
  }

  die_usage("no subcommand selected");
}
