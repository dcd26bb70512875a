// Exercises the C ABI end to end through the shared library: handle lifetime,
// status codes, thread-local error text, and the array marshalling contracts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "manip/capi.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct TempDir {
  std::filesystem::path dir;
  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("capi_tests." + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
  std::string path(const char* name) const { return (dir / name).string(); }
};

TempDir& tmp() {
  static TempDir t;
  return t;
}

void write_pgm8(const std::string& path, int w, int h,
                const std::vector<uint8_t>& pix) {
  FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  std::fprintf(f, "P5\n%d %d\n255\n", w, h);
  std::fwrite(pix.data(), 1, pix.size(), f);
  std::fclose(f);
}

void write_pgm16(const std::string& path, int w, int h, uint16_t value) {
  FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  std::fprintf(f, "P5\n%d %d\n65535\n", w, h);
  std::vector<uint8_t> row(static_cast<std::size_t>(w) * 2);
  for (int x = 0; x < w; ++x) {
    row[static_cast<std::size_t>(x) * 2] = static_cast<uint8_t>(value >> 8);
    row[static_cast<std::size_t>(x) * 2 + 1] = static_cast<uint8_t>(value & 0xFF);
  }
  for (int y = 0; y < h; ++y) std::fwrite(row.data(), 1, row.size(), f);
  std::fclose(f);
}

// Small LCG so fixtures stay independent of the library under test.
struct Lcg {
  uint64_t s;
  explicit Lcg(uint64_t seed) : s(seed) {}
  uint32_t next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<uint32_t>(s >> 33);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (next() / 4294967296.0);
  }
};

std::string noise_pgm() {
  static std::string path;
  if (path.empty()) {
    path = tmp().path("noise.pgm");
    Lcg g(17);
    std::vector<uint8_t> pix(160 * 120);
    for (auto& p : pix) p = static_cast<uint8_t>(g.next() & 0xFF);
    write_pgm8(path, 160, 120, pix);
  }
  return path;
}

void mat3_mul(const double a[9], const double b[9], double out[9]) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      out[r * 3 + c] = a[r * 3 + 0] * b[0 * 3 + c] + a[r * 3 + 1] * b[1 * 3 + c] +
                       a[r * 3 + 2] * b[2 * 3 + c];
    }
}

void pose_from(const double r[9], double tx, double ty, double tz, double out[16]) {
  for (int i = 0; i < 16; ++i) out[i] = 0.0;
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) out[row * 4 + col] = r[row * 3 + col];
  out[3] = tx;
  out[7] = ty;
  out[11] = tz;
  out[15] = 1.0;
}

void rot_z(double a, double out[9]) {
  const double c = std::cos(a), s = std::sin(a);
  const double m[9] = {c, -s, 0, s, c, 0, 0, 0, 1};
  std::memcpy(out, m, sizeof(m));
}

void rot_x(double a, double out[9]) {
  const double c = std::cos(a), s = std::sin(a);
  const double m[9] = {1, 0, 0, 0, c, -s, 0, s, c};
  std::memcpy(out, m, sizeof(m));
}

double wrap(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

bool q_close(const double* a, const double* b, double tol) {
  for (int i = 0; i < 6; ++i) {
    if (std::abs(wrap(a[i] - b[i])) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("status names are stable codes") {
  CHECK(std::string(manip_status_name(MANIP_OK)) == "OK");
  CHECK(std::string(manip_status_name(MANIP_E_INVALID_ARGUMENT)) ==
        "E_INVALID_ARGUMENT");
  CHECK(std::string(manip_status_name(MANIP_E_IO)) == "E_IO");
  CHECK(std::string(manip_status_name(MANIP_E_PARSE)) == "E_PARSE");
  CHECK(std::string(manip_status_name(MANIP_E_UNREACHABLE)) == "E_UNREACHABLE");
  CHECK(std::string(manip_status_name(MANIP_E_NO_CONSENSUS)) == "E_NO_CONSENSUS");
  CHECK(std::string(manip_status_name(MANIP_E_TOO_FEW_CORRESPONDENCES)) ==
        "E_TOO_FEW_CORRESPONDENCES");
  CHECK(std::string(manip_status_name(MANIP_E_INVALID_DEPTH)) == "E_INVALID_DEPTH");
  CHECK(std::string(manip_status_name(MANIP_E_DEGENERATE_BASIS)) ==
        "E_DEGENERATE_BASIS");
  CHECK(std::string(manip_status_name(MANIP_E_POINT_AT_INFINITY)) ==
        "E_POINT_AT_INFINITY");
  CHECK(std::string(manip_status_name(MANIP_E_IMAGE_TOO_SMALL)) ==
        "E_IMAGE_TOO_SMALL");
  CHECK(std::string(manip_status_name(MANIP_E_EMPTY_INPUT)) == "E_EMPTY_INPUT");
  CHECK(std::string(manip_status_name(MANIP_E_INTERNAL)) == "E_INTERNAL");
}

TEST_CASE("fk and ik round trip through the array interface") {
  manip_robot* robot = nullptr;
  REQUIRE(manip_robot_default(&robot) == MANIP_OK);

  const double q[6] = {0.3, -1.2, 0.9, 0.2, 1.1, -0.4};
  double pose[16];
  REQUIRE(manip_fk(robot, q, pose) == MANIP_OK);
  CHECK(pose[12] == 0.0);
  CHECK(pose[15] == 1.0);

  double out_q[48];
  uint8_t near_singular[8];
  int count = 0;
  REQUIRE(manip_ik(robot, pose, q[5], out_q, near_singular, &count) == MANIP_OK);
  REQUIRE(count >= 1);
  REQUIRE(count <= 8);

  bool seed_found = false;
  for (int s = 0; s < count; ++s) {
    double back[16];
    REQUIRE(manip_fk(robot, out_q + s * 6, back) == MANIP_OK);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(back[i] - pose[i]) < 1e-8);
    if (q_close(out_q + s * 6, q, 1e-6)) seed_found = true;
  }
  CHECK(seed_found);

  double picked[6];
  REQUIRE(manip_ik_select(robot, pose, q, picked) == MANIP_OK);
  CHECK(q_close(picked, q, 1e-6));

  manip_robot_free(robot);
}

TEST_CASE("wrist singularity is flagged and theta6 is pinned") {
  manip_robot* robot = nullptr;
  REQUIRE(manip_robot_default(&robot) == MANIP_OK);
  const double q[6] = {0.3, -1.0, 0.8, 0.4, 0.0, 0.7};
  double pose[16];
  REQUIRE(manip_fk(robot, q, pose) == MANIP_OK);

  double out_q[48];
  uint8_t near_singular[8];
  int count = 0;
  REQUIRE(manip_ik(robot, pose, 0.25, out_q, near_singular, &count) == MANIP_OK);
  bool pinned = false;
  for (int s = 0; s < count; ++s) {
    if (near_singular[s] != 0 && std::abs(wrap(out_q[s * 6 + 5] - 0.25)) < 1e-9) {
      pinned = true;
    }
  }
  CHECK(pinned);
  manip_robot_free(robot);
}

TEST_CASE("failures set the status and the thread-local message") {
  const double q[6] = {0, 0, 0, 0, 0, 0};
  double pose[16];
  int rc = manip_fk(nullptr, q, pose);
  CHECK(rc == MANIP_E_INVALID_ARGUMENT);
  CHECK(std::string(manip_last_error()).find("robot") != std::string::npos);

  manip_robot* robot = nullptr;
  REQUIRE(manip_robot_default(&robot) == MANIP_OK);
  CHECK(std::string(manip_last_error()).empty());

  // Out of reach: well beyond the arm span.
  double far[16] = {1, 0, 0, 2.0, 0, 1, 0, 0.0, 0, 0, 1, 0.5, 0, 0, 0, 1};
  double out_q[48];
  int count = 0;
  rc = manip_ik(robot, far, 0.0, out_q, nullptr, &count);
  CHECK(rc == MANIP_E_UNREACHABLE);
  CHECK(std::string(manip_status_name(rc)) == "E_UNREACHABLE");
  CHECK(!std::string(manip_last_error()).empty());

  // Scaled rotation block is not a pose.
  double bad[16] = {2, 0, 0, 0.3, 0, 2, 0, 0.0, 0, 0, 2, 0.4, 0, 0, 0, 1};
  CHECK(manip_ik(robot, bad, 0.0, out_q, nullptr, &count) ==
        MANIP_E_INVALID_ARGUMENT);

  // Bottom row must be (0, 0, 0, 1).
  double skew[16] = {1, 0, 0, 0.3, 0, 1, 0, 0.0, 0, 0, 1, 0.4, 0.5, 0, 0, 1};
  CHECK(manip_ik(robot, skew, 0.0, out_q, nullptr, &count) ==
        MANIP_E_INVALID_ARGUMENT);

  CHECK(manip_robot_load(tmp().path("missing.json").c_str(), &robot) == MANIP_E_IO);

  manip_robot_free(robot);
}

TEST_CASE("base kinematics round trip and integrate") {
  manip_robot* robot = nullptr;
  REQUIRE(manip_robot_default(&robot) == MANIP_OK);

  double w[4];
  REQUIRE(manip_base_wheel_speeds(robot, 0.3, -0.2, 0.5, w) == MANIP_OK);
  double v[3];
  double residual = -1.0;
  REQUIRE(manip_base_body_velocity(robot, w, v, &residual) == MANIP_OK);
  CHECK(std::abs(v[0] - 0.3) < 1e-12);
  CHECK(std::abs(v[1] + 0.2) < 1e-12);
  CHECK(std::abs(v[2] - 0.5) < 1e-12);
  CHECK(residual < 1e-12);

  const double pose[3] = {0.0, 0.0, 0.0};
  double next[3];
  const double straight[3] = {1.0, 0.0, 0.0};
  REQUIRE(manip_base_integrate(pose, straight, 0.5, next) == MANIP_OK);
  CHECK(std::abs(next[0] - 0.5) < 1e-12);
  CHECK(std::abs(next[1]) < 1e-12);
  CHECK(std::abs(next[2]) < 1e-12);

  const double spin[3] = {0.0, 0.0, 1.2};
  REQUIRE(manip_base_integrate(pose, spin, 0.5, next) == MANIP_OK);
  CHECK(std::abs(next[0]) < 1e-12);
  CHECK(std::abs(next[2] - 0.6) < 1e-12);

  CHECK(manip_base_wheel_speeds(nullptr, 0, 0, 0, w) == MANIP_E_INVALID_ARGUMENT);
  manip_robot_free(robot);
}

TEST_CASE("workspace sampling is deterministic and writes point files") {
  manip_robot* robot = nullptr;
  REQUIRE(manip_robot_default(&robot) == MANIP_OK);

  manip_workspace* a = nullptr;
  manip_workspace* b = nullptr;
  REQUIRE(manip_workspace_sample(robot, 20000, 42, &a) == MANIP_OK);
  REQUIRE(manip_workspace_sample(robot, 20000, 42, &b) == MANIP_OK);

  uint64_t na = 0, nb = 0;
  double reach_a = 0, reach_b = 0, vol_a = 0, vol_b = 0;
  REQUIRE(manip_workspace_stats(a, &na, &reach_a, &vol_a) == MANIP_OK);
  REQUIRE(manip_workspace_stats(b, &nb, &reach_b, &vol_b) == MANIP_OK);
  CHECK(na == 20000);
  CHECK(nb == 20000);
  CHECK(reach_a == reach_b);
  CHECK(vol_a == vol_b);
  CHECK(reach_a > 0.3);
  CHECK(vol_a > 0.0);

  const std::string csv = tmp().path("ws.csv");
  REQUIRE(manip_workspace_write_csv(a, csv.c_str()) == MANIP_OK);
  FILE* f = std::fopen(csv.c_str(), "rb");
  REQUIRE(f != nullptr);
  int lines = 0, ch;
  while ((ch = std::fgetc(f)) != EOF) lines += ch == '\n';
  std::fclose(f);
  CHECK(lines == 20000);

  CHECK(manip_workspace_write_xyz(a, "/nonexistent/dir/ws.xyz") == MANIP_E_IO);

  manip_workspace_free(a);
  manip_workspace_free(b);
  manip_robot_free(robot);
}

TEST_CASE("feature detection and both matcher paths agree") {
  manip_image* img = nullptr;
  REQUIRE(manip_image_load_pgm(noise_pgm().c_str(), &img) == MANIP_OK);
  int w = 0, h = 0;
  REQUIRE(manip_image_size(img, &w, &h) == MANIP_OK);
  CHECK(w == 160);
  CHECK(h == 120);

  manip_features* feats = nullptr;
  REQUIRE(manip_detect(img, 300, &feats) == MANIP_OK);
  int n = 0;
  REQUIRE(manip_features_count(feats, &n) == MANIP_OK);
  REQUIRE(n >= 10);

  double u = 0, v = 0, response = 0, orientation = 0;
  REQUIRE(manip_features_keypoint(feats, 0, &u, &v, &response, &orientation) ==
          MANIP_OK);
  CHECK(u >= 0.0);
  CHECK(u <= 160.0);
  CHECK(response > 0.0);
  uint64_t words[4];
  REQUIRE(manip_features_descriptor(feats, 0, words) == MANIP_OK);
  CHECK(manip_features_keypoint(feats, -1, &u, &v, nullptr, nullptr) ==
        MANIP_E_INVALID_ARGUMENT);
  CHECK(manip_features_descriptor(feats, n, words) == MANIP_E_INVALID_ARGUMENT);

  // Self-match: every keypoint either finds itself at distance zero or is a
  // duplicate descriptor counted as degenerate.
  manip_matches* brute = nullptr;
  manip_matches* tree = nullptr;
  REQUIRE(manip_match(feats, feats, 0, 0.8, &brute) == MANIP_OK);
  REQUIRE(manip_match(feats, feats, 1, 0.8, &tree) == MANIP_OK);
  int nb = 0, db = 0, nt = 0, dt = 0;
  REQUIRE(manip_matches_count(brute, &nb, &db) == MANIP_OK);
  REQUIRE(manip_matches_count(tree, &nt, &dt) == MANIP_OK);
  CHECK(nb == nt);
  CHECK(db == dt);
  CHECK(nb + db == n);
  for (int i = 0; i < nb; ++i) {
    int ta = 0, fa = 0, tb = 0, fb = 0;
    double da = -1, dbd = -1;
    REQUIRE(manip_matches_get(brute, i, &ta, &fa, &da) == MANIP_OK);
    REQUIRE(manip_matches_get(tree, i, &tb, &fb, &dbd) == MANIP_OK);
    CHECK(ta == tb);
    CHECK(fa == fb);
    CHECK(da == dbd);
    CHECK(da == 0.0);
  }

  CHECK(manip_match(feats, feats, 7, 0.8, &brute) == MANIP_E_INVALID_ARGUMENT);
  CHECK(manip_match(feats, feats, 0, 0.0, &brute) == MANIP_E_INVALID_ARGUMENT);

  manip_matches_free(brute);
  manip_matches_free(tree);
  manip_features_free(feats);
  manip_image_free(img);
}

TEST_CASE("feature and image failure statuses") {
  const std::string small = tmp().path("small.pgm");
  write_pgm8(small, 16, 16, std::vector<uint8_t>(256, 7));
  manip_image* img = nullptr;
  REQUIRE(manip_image_load_pgm(small.c_str(), &img) == MANIP_OK);
  manip_features* feats = nullptr;
  CHECK(manip_detect(img, 100, &feats) == MANIP_E_IMAGE_TOO_SMALL);
  manip_image_free(img);

  const std::string ascii = tmp().path("ascii.pgm");
  FILE* f = std::fopen(ascii.c_str(), "wb");
  REQUIRE(f != nullptr);
  std::fprintf(f, "P2\n2 2\n255\n0 1 2 3\n");
  std::fclose(f);
  CHECK(manip_image_load_pgm(ascii.c_str(), &img) == MANIP_E_PARSE);
  CHECK(manip_image_load_pgm(tmp().path("absent.pgm").c_str(), &img) == MANIP_E_IO);

  // A flat image detects no corners; matching an empty set is an error.
  const std::string flat = tmp().path("flat.pgm");
  write_pgm8(flat, 64, 64, std::vector<uint8_t>(64 * 64, 128));
  REQUIRE(manip_image_load_pgm(flat.c_str(), &img) == MANIP_OK);
  manip_features* empty = nullptr;
  REQUIRE(manip_detect(img, 100, &empty) == MANIP_OK);
  int n = -1;
  REQUIRE(manip_features_count(empty, &n) == MANIP_OK);
  CHECK(n == 0);

  manip_image* noise = nullptr;
  REQUIRE(manip_image_load_pgm(noise_pgm().c_str(), &noise) == MANIP_OK);
  manip_features* full = nullptr;
  REQUIRE(manip_detect(noise, 50, &full) == MANIP_OK);
  manip_matches* m = nullptr;
  CHECK(manip_match(empty, full, 0, 0.8, &m) == MANIP_E_EMPTY_INPUT);

  manip_features_free(empty);
  manip_features_free(full);
  manip_image_free(img);
  manip_image_free(noise);
}

TEST_CASE("homography estimation recovers the map and flags degeneracies") {
  const double h_true[9] = {1.02, 0.01, 4.0, -0.008, 0.97, -3.0, 1e-5, -2e-5, 1.0};
  std::vector<double> corr;
  std::vector<bool> clean;
  int idx = 0;
  for (int gy = 0; gy < 10; ++gy) {
    for (int gx = 0; gx < 12; ++gx, ++idx) {
      const double ut = 20.0 * gx, vt = 16.0 * gy;
      const double wd = h_true[6] * ut + h_true[7] * vt + h_true[8];
      double uf = (h_true[0] * ut + h_true[1] * vt + h_true[2]) / wd;
      double vf = (h_true[3] * ut + h_true[4] * vt + h_true[5]) / wd;
      const bool outlier = idx % 6 == 5;
      if (outlier) {
        uf += 37.0 + idx;
        vf -= 23.0 + idx;
      }
      clean.push_back(!outlier);
      corr.insert(corr.end(), {ut, vt, uf, vf});
    }
  }
  const int n = idx;

  double h[9];
  std::vector<uint8_t> mask(static_cast<std::size_t>(n), 2);
  int inliers = 0, iterations = 0;
  double mean_err = -1.0;
  REQUIRE(manip_estimate_homography(corr.data(), n, 1.5, 1000, 60, 9, h, mask.data(),
                                    &inliers, &iterations, &mean_err) == MANIP_OK);
  CHECK(inliers == 100);
  int mask_count = 0;
  for (int i = 0; i < n; ++i) {
    mask_count += mask[static_cast<std::size_t>(i)];
    CHECK((mask[static_cast<std::size_t>(i)] == 1) == clean[static_cast<std::size_t>(i)]);
  }
  CHECK(mask_count == inliers);
  CHECK(iterations >= 1);
  CHECK(mean_err < 1e-6);
  for (int i = 0; i < 9; ++i) CHECK(std::abs(h[i] - h_true[i]) < 1e-6);

  CHECK(manip_estimate_homography(corr.data(), 3, 1.5, 100, 4, 1, h, nullptr, nullptr,
                                  nullptr, nullptr) == MANIP_E_TOO_FEW_CORRESPONDENCES);
  CHECK(manip_estimate_homography(nullptr, 5, 1.5, 100, 4, 1, h, nullptr, nullptr,
                                  nullptr, nullptr) == MANIP_E_INVALID_ARGUMENT);

  Lcg g(33);
  std::vector<double> junk;
  for (int i = 0; i < 40; ++i) {
    junk.insert(junk.end(), {g.uniform(0, 640), g.uniform(0, 480),
                             g.uniform(0, 640), g.uniform(0, 480)});
  }
  CHECK(manip_estimate_homography(junk.data(), 40, 1.0, 300, 20, 2, h, nullptr,
                                  nullptr, nullptr, nullptr) == MANIP_E_NO_CONSENSUS);
}

TEST_CASE("planar pose from a constant depth plane") {
  const std::string depth_path = tmp().path("plane.pgm");
  write_pgm16(depth_path, 640, 480, 1000);
  manip_depth* depth = nullptr;
  REQUIRE(manip_depth_load_pgm(depth_path.c_str(), &depth) == MANIP_OK);

  // Affine map placing the 200x150 template around the image center.
  const double h[9] = {0.5, 0, 200, 0, 0.5, 165, 0, 0, 1};
  double position[3], frame[9], euler[3];
  int gimbal = -1;
  REQUIRE(manip_planar_pose(h, 200, 150, 0.2, depth, 600, 600, 320, 240, 0.001,
                            position, frame, euler, &gimbal) == MANIP_OK);
  CHECK(std::abs(position[0] - (250.0 - 320.0) / 600.0) < 1e-9);
  CHECK(std::abs(position[1] - (202.5 - 240.0) / 600.0) < 1e-9);
  CHECK(std::abs(position[2] - 1.0) < 1e-9);
  const double expect_frame[9] = {1, 0, 0, 0, -1, 0, 0, 0, -1};
  for (int i = 0; i < 9; ++i) CHECK(std::abs(frame[i] - expect_frame[i]) < 1e-9);
  CHECK(std::abs(euler[0]) < 1e-9);
  CHECK(std::abs(euler[1]) < 1e-9);
  CHECK(std::abs(std::abs(euler[2]) - kPi) < 1e-9);
  CHECK(gimbal == 0);

  // All template points collapse to one pixel: no basis.
  const double collapse[9] = {0, 0, 250, 0, 0, 200, 0, 0, 1};
  CHECK(manip_planar_pose(collapse, 200, 150, 0.2, depth, 600, 600, 320, 240, 0.001,
                          position, nullptr, nullptr, nullptr) ==
        MANIP_E_DEGENERATE_BASIS);

  // The template center maps to w = 0.
  const double infinity[9] = {1, 0, 0, 0, 1, 0, -0.01, 0, 1};
  CHECK(manip_planar_pose(infinity, 200, 150, 0.2, depth, 600, 600, 320, 240, 0.001,
                          position, nullptr, nullptr, nullptr) ==
        MANIP_E_POINT_AT_INFINITY);

  // Holes everywhere: deprojection has no valid neighbors.
  const std::string holes = tmp().path("holes.pgm");
  write_pgm16(holes, 640, 480, 0);
  manip_depth* empty = nullptr;
  REQUIRE(manip_depth_load_pgm(holes.c_str(), &empty) == MANIP_OK);
  CHECK(manip_planar_pose(h, 200, 150, 0.2, empty, 600, 600, 320, 240, 0.001,
                          position, nullptr, nullptr, nullptr) ==
        MANIP_E_INVALID_DEPTH);

  manip_depth_free(empty);
  manip_depth_free(depth);
}

TEST_CASE("grasp record and adapt transport the relative pose") {
  double rz[9], rx[9], r_obj[9];
  rot_z(0.3, rz);
  rot_x(-0.2, rx);
  mat3_mul(rz, rx, r_obj);
  double to[16], tb[16];
  pose_from(r_obj, 0.4, -0.1, 0.3, to);
  double r_tool[9];
  rot_z(-0.9, r_tool);
  pose_from(r_tool, 0.35, -0.05, 0.42, tb);

  double tg[16];
  REQUIRE(manip_grasp_record(to, tb, tg) == MANIP_OK);

  // Same object pose: adaptation reproduces the recorded tool pose.
  double back[16];
  REQUIRE(manip_grasp_adapt(to, tg, back) == MANIP_OK);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(back[i] - tb[i]) < 1e-12);

  // Moved object: the relative transform is preserved exactly.
  double to2[16];
  pose_from(r_obj, 0.45, 0.12, 0.27, to2);
  double tb2[16];
  REQUIRE(manip_grasp_adapt(to2, tg, tb2) == MANIP_OK);
  double tg2[16];
  REQUIRE(manip_grasp_record(to2, tb2, tg2) == MANIP_OK);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(tg2[i] - tg[i]) < 1e-12);

  double yaw_only[16];
  rot_z(0.7, rz);
  pose_from(rz, 0, 0, 0, yaw_only);
  double zyx[3];
  int gimbal = -1;
  REQUIRE(manip_grasp_angles(yaw_only, zyx, &gimbal) == MANIP_OK);
  CHECK(std::abs(zyx[0] - 0.7) < 1e-12);
  CHECK(std::abs(zyx[1]) < 1e-12);
  CHECK(std::abs(zyx[2]) < 1e-12);
  CHECK(gimbal == 0);

  double zyx2[3];
  REQUIRE(manip_euler_from_pose(yaw_only, zyx2, nullptr) == MANIP_OK);
  CHECK(zyx2[0] == zyx[0]);

  double bad[16] = {2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1};
  CHECK(manip_grasp_angles(bad, zyx, &gimbal) == MANIP_E_INVALID_ARGUMENT);
}

TEST_CASE("simulate is deterministic and honors overrides") {
  const std::string scene = tmp().path("scene.json");
  FILE* f = std::fopen(scene.c_str(), "wb");
  REQUIRE(f != nullptr);
  std::fprintf(f, R"({
  "template": {"width_px": 200, "height_px": 150, "physical_width_m": 0.2,
               "keypoint_count": 120, "keypoint_seed": 11},
  "camera": {"fx": 600.0, "fy": 600.0, "cx": 320.0, "cy": 240.0,
             "depth_scale_m": 0.001, "width_px": 640, "height_px": 480},
  "trajectory": [
    {"t": 0.0, "pose": {"r": [1,0,0, 0,-1,0, 0,0,-1], "t": [0.02, -0.01, 1.0]}},
    {"t": 0.5, "pose": {"r": [1,0,0, 0,-1,0, 0,0,-1], "t": [0.02, -0.01, 1.0]}}
  ],
  "frame_rate_hz": 30.0,
  "pixel_noise_px": 0.3,
  "outlier_rate": 0.1,
  "background_depth_m": 3.0,
  "seed": 5,
  "trials": 1
})");
  std::fclose(f);

  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(manip_simulate(scene.c_str(), nullptr, 0, 0, 0, 0, 0, 0, 0, &a) == MANIP_OK);
  REQUIRE(manip_simulate(scene.c_str(), nullptr, 0, 0, 0, 0, 0, 0, 0, &b) == MANIP_OK);
  CHECK(std::strcmp(a, b) == 0);

  auto j = nlohmann::json::parse(a);
  CHECK(j.at("frames").get<int>() == 16);
  CHECK(j.at("trials").get<int>() == 1);
  CHECK(j.at("threshold_cm").get<double>() == 2.0);
  CHECK(j.contains("tracking_accuracy"));
  CHECK(j.contains("grasp_success_rate"));
  CHECK(!j.contains("mean_latency_ms"));

  char* seeded = nullptr;
  REQUIRE(manip_simulate(scene.c_str(), nullptr, 1, 999, 0, 0, 0, 0, 0, &seeded) ==
          MANIP_OK);
  CHECK(std::strcmp(a, seeded) != 0);

  char* tuned = nullptr;
  REQUIRE(manip_simulate(scene.c_str(), nullptr, 0, 0, 1, 0.5, 1, 2, 1, &tuned) ==
          MANIP_OK);
  auto jt = nlohmann::json::parse(tuned);
  CHECK(jt.at("threshold_cm").get<double>() == 0.5);
  CHECK(jt.at("trials").get<int>() == 2);
  CHECK(jt.at("frames").get<int>() == 32);
  CHECK(jt.contains("mean_latency_ms"));
  CHECK(jt.contains("throughput_fps"));

  manip_string_free(a);
  manip_string_free(b);
  manip_string_free(seeded);
  manip_string_free(tuned);

  char* out = nullptr;
  CHECK(manip_simulate(tmp().path("no_scene.json").c_str(), nullptr, 0, 0, 0, 0, 0, 0,
                       0, &out) == MANIP_E_IO);
  const std::string broken = tmp().path("broken.json");
  f = std::fopen(broken.c_str(), "wb");
  REQUIRE(f != nullptr);
  std::fprintf(f, "{}");
  std::fclose(f);
  CHECK(manip_simulate(broken.c_str(), nullptr, 0, 0, 0, 0, 0, 0, 0, &out) ==
        MANIP_E_PARSE);
  CHECK(manip_simulate(scene.c_str(), tmp().path("no_robot.json").c_str(), 0, 0, 0, 0,
                       0, 0, 0, &out) == MANIP_E_IO);
}
