#include "manip/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "manip/rng.hpp"

namespace manip {

namespace {
constexpr std::uint64_t kChunk = 4096;
}

WorkspaceStats sample_workspace(std::uint64_t n, std::uint64_t seed, const DhTable& dh,
                                const JointLimits& limits) {
  WorkspaceStats ws;
  ws.samples.reserve(n);
  const double d1 = dh.rows[0].d;
  for (std::uint64_t start = 0; start < n; start += kChunk) {
    Rng rng(mix_seed(seed, start / kChunk));
    const std::uint64_t stop = std::min(n, start + kChunk);
    for (std::uint64_t k = start; k < stop; ++k) {
      JointConfig q;
      for (int j = 0; j < 6; ++j) q[j] = rng.uniform(limits.lo[j], limits.hi[j]);
      Vec3 p = fk_position(q, dh);
      ws.samples.push_back(p);
      double reach = std::sqrt(p.x() * p.x() + p.y() * p.y() +
                               (p.z() - d1) * (p.z() - d1));
      ws.max_reach = std::max(ws.max_reach, reach);
    }
  }
  ws.volume_estimate = voxel_volume(ws.samples);
  return ws;
}

double voxel_volume(const std::vector<Vec3>& samples, double voxel_m) {
  if (samples.empty()) return 0.0;
  Vec3 lo = samples.front(), hi = samples.front();
  for (const Vec3& p : samples) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::int64_t nx = static_cast<std::int64_t>(std::floor((hi.x() - lo.x()) / voxel_m)) + 1;
  std::int64_t ny = static_cast<std::int64_t>(std::floor((hi.y() - lo.y()) / voxel_m)) + 1;
  std::int64_t nz = static_cast<std::int64_t>(std::floor((hi.z() - lo.z()) / voxel_m)) + 1;
  std::vector<std::int64_t> cells;
  cells.reserve(samples.size());
  for (const Vec3& p : samples) {
    auto clampi = [](std::int64_t v, std::int64_t n) { return std::clamp<std::int64_t>(v, 0, n - 1); };
    std::int64_t ix = clampi(static_cast<std::int64_t>(std::floor((p.x() - lo.x()) / voxel_m)), nx);
    std::int64_t iy = clampi(static_cast<std::int64_t>(std::floor((p.y() - lo.y()) / voxel_m)), ny);
    std::int64_t iz = clampi(static_cast<std::int64_t>(std::floor((p.z() - lo.z()) / voxel_m)), nz);
    cells.push_back((ix * ny + iy) * nz + iz);
  }
  std::sort(cells.begin(), cells.end());
  std::int64_t occupied = std::unique(cells.begin(), cells.end()) - cells.begin();
  return static_cast<double>(occupied) * voxel_m * voxel_m * voxel_m;
}

namespace {

Result<bool> write_rows(const WorkspaceStats& ws, const std::string& path, const char* fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return Result<bool>::failure(Status::Io, "cannot open " + path + " for writing");
  }
  char line[128];
  for (const Vec3& p : ws.samples) {
    int len = std::snprintf(line, sizeof line, fmt, p.x(), p.y(), p.z());
    out.write(line, len);
  }
  out.flush();
  if (!out) {
    return Result<bool>::failure(Status::Io, "write failed for " + path);
  }
  return Result<bool>::success(true);
}

}  // namespace

Result<bool> write_workspace_csv(const WorkspaceStats& ws, const std::string& path) {
  return write_rows(ws, path, "%.9g,%.9g,%.9g\n");
}

Result<bool> write_workspace_xyz(const WorkspaceStats& ws, const std::string& path) {
  return write_rows(ws, path, "%.9g %.9g %.9g\n");
}

}  // namespace manip
