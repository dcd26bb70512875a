#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "manip/rng.hpp"
#include "manip/workspace.hpp"

using namespace manip;

namespace {

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) {
    path = std::string("ws_test_") + name;
  }
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("same seed reproduces samples exactly") {
  const DhTable dh = DhTable::ur5e();
  const JointLimits lim = JointLimits::full();
  const WorkspaceStats a = sample_workspace(5000, 77, dh, lim);
  const WorkspaceStats b = sample_workspace(5000, 77, dh, lim);
  REQUIRE(a.samples.size() == 5000);
  REQUIRE(b.samples.size() == 5000);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK((a.samples[i] - b.samples[i]).norm() == 0.0);  // bitwise, not approximate
  }
  CHECK(a.max_reach == b.max_reach);
  CHECK(a.volume_estimate == b.volume_estimate);

  const WorkspaceStats c = sample_workspace(5000, 78, dh, lim);
  bool any_differ = false;
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    if ((c.samples[i] - a.samples[i]).norm() != 0.0) any_differ = true;
  }
  CHECK(any_differ);
}

TEST_CASE("longer runs extend shorter ones sample for sample") {
  const DhTable dh = DhTable::ur5e();
  const JointLimits lim = JointLimits::full();
  // 4096-sample chunks are sub-seeded independently, so prefixes must agree
  // even across the chunk boundary.
  const WorkspaceStats small = sample_workspace(5000, 9, dh, lim);
  const WorkspaceStats big = sample_workspace(9000, 9, dh, lim);
  for (std::size_t i = 0; i < small.samples.size(); ++i) {
    CHECK((big.samples[i] - small.samples[i]).norm() == 0.0);
  }
  CHECK(big.max_reach >= small.max_reach);
}

TEST_CASE("max_reach matches a direct scan and respects the geometric bound") {
  const DhTable dh = DhTable::ur5e();
  const JointLimits lim = JointLimits::full();
  const WorkspaceStats ws = sample_workspace(20000, 123, dh, lim);
  const double d1 = dh.rows[0].d;
  double scan = 0.0;
  for (const Vec3& p : ws.samples) {
    const Vec3 rel(p.x(), p.y(), p.z() - d1);
    scan = std::max(scan, rel.norm());
  }
  CHECK(ws.max_reach == doctest::Approx(scan).epsilon(1e-15));
  // Upper bound: serial chain fully stretched.
  const double sup = std::abs(dh.rows[1].a) + std::abs(dh.rows[2].a) +
                     dh.rows[3].d + dh.rows[4].d + dh.rows[5].d;
  CHECK(ws.max_reach <= sup + 1e-12);
}

TEST_CASE("voxel volume counts distinct occupied cells") {
  const double v3 = 0.02 * 0.02 * 0.02;
  // A lone sample occupies exactly one voxel.
  CHECK(voxel_volume({Vec3(0.3, -0.1, 0.7)}, 0.02) == doctest::Approx(v3).epsilon(1e-12));
  // Two samples far apart occupy two.
  CHECK(voxel_volume({Vec3(0, 0, 0), Vec3(1.234, 0.567, -0.891)}, 0.02) ==
        doctest::Approx(2 * v3).epsilon(1e-12));
  // Bitwise duplicates never double-count.
  std::vector<Vec3> dup;
  Rng rng(41);
  for (int i = 0; i < 500; ++i) {
    dup.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  const double base = voxel_volume(dup, 0.02);
  std::vector<Vec3> doubled = dup;
  doubled.insert(doubled.end(), dup.begin(), dup.end());
  CHECK(voxel_volume(doubled, 0.02) == doctest::Approx(base).epsilon(1e-12));

  CHECK(voxel_volume({}, 0.02) == 0.0);
}

TEST_CASE("voxel volume matches an independent set-based count") {
  Rng rng(42);
  std::vector<Vec3> pts;
  for (int i = 0; i < 3000; ++i) {
    pts.emplace_back(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9),
                     rng.uniform(-0.2, 1.1));
  }
  const double voxel = 0.02;
  Vec3 lo = pts.front(), hi = pts.front();
  for (const Vec3& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  auto axis_cells = [&](double span) {
    return static_cast<std::int64_t>(std::floor(span / voxel)) + 1;
  };
  const std::int64_t nx = axis_cells(hi.x() - lo.x());
  const std::int64_t ny = axis_cells(hi.y() - lo.y());
  const std::int64_t nz = axis_cells(hi.z() - lo.z());
  std::set<std::array<std::int64_t, 3>> occupied;
  for (const Vec3& p : pts) {
    auto idx = [&](double val, double base, std::int64_t n) {
      auto i = static_cast<std::int64_t>(std::floor((val - base) / voxel));
      return std::clamp<std::int64_t>(i, 0, n - 1);
    };
    occupied.insert({idx(p.x(), lo.x(), nx), idx(p.y(), lo.y(), ny),
                     idx(p.z(), lo.z(), nz)});
  }
  const double expect = static_cast<double>(occupied.size()) * voxel * voxel * voxel;
  CHECK(voxel_volume(pts, voxel) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("csv and xyz writers emit one row per sample") {
  const DhTable dh = DhTable::ur5e();
  const WorkspaceStats ws = sample_workspace(100, 5, dh, JointLimits::full());
  TempPath csv("out.csv");
  TempPath xyz("out.xyz");
  REQUIRE(write_workspace_csv(ws, csv.path).ok());
  REQUIRE(write_workspace_xyz(ws, xyz.path).ok());

  std::ifstream in(csv.path);
  std::string line;
  int rows = 0;
  double first_x = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (rows == 0) {
      REQUIRE(std::sscanf(line.c_str(), "%lf", &first_x) == 1);
    }
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
    ++rows;
  }
  CHECK(rows == 100);
  CHECK(std::abs(first_x - ws.samples.front().x()) < 1e-8);

  std::ifstream in2(xyz.path);
  int xyz_rows = 0;
  double x = 0, y = 0, z = 0;
  while (std::getline(in2, line)) {
    if (line.empty()) continue;
    ++xyz_rows;
    std::istringstream ss(line);
    REQUIRE((ss >> x >> y >> z));
  }
  CHECK(xyz_rows == 100);
  // Last parsed row should match the last sample to printed precision.
  CHECK(std::abs(x - ws.samples.back().x()) < 1e-8);

  CHECK(write_workspace_csv(ws, "/nonexistent_dir/x.csv").status == Status::Io);
}
