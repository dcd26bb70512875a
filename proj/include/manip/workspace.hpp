#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manip/arm_kin.hpp"

namespace manip {

struct WorkspaceStats {
  std::vector<Vec3> samples;     // end-effector positions, m
  double max_reach = 0.0;        // max ||(Px, Py, Pz - d1)||, m
  double volume_estimate = 0.0;  // occupied-voxel volume, m^3
};

// n uniform joint samples within limits, evaluated through fk_position.
// Sample k depends only on (seed, k) via fixed-size sub-seeded chunks, so a
// longer run extends a shorter one and max_reach is monotone in n.
WorkspaceStats sample_workspace(std::uint64_t n, std::uint64_t seed, const DhTable& dh,
                                const JointLimits& limits);

// Occupied-voxel volume over the samples' bounding box, 2 cm voxels.
double voxel_volume(const std::vector<Vec3>& samples, double voxel_m = 0.02);

Result<bool> write_workspace_csv(const WorkspaceStats& ws, const std::string& path);
Result<bool> write_workspace_xyz(const WorkspaceStats& ws, const std::string& path);

}  // namespace manip
