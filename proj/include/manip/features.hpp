#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "manip/error.hpp"
#include "manip/image.hpp"

namespace manip {

struct Keypoint {
  double u = 0.0;  // px, sub-pixel
  double v = 0.0;
  double response = 0.0;
  double orientation = 0.0;  // rad
};

struct Descriptor256 {
  std::array<std::uint64_t, 4> words{};

  int hamming(const Descriptor256& other) const;
};

struct FeatureSet {
  std::vector<Keypoint> keypoints;   // sorted by response descending
  std::vector<Descriptor256> descriptors;  // parallel to keypoints
};

// Corner-response detection (Harris) with 3x3 non-max suppression, sub-pixel
// parabola refinement, intensity-centroid orientation, and oriented 256-bit
// intensity-comparison descriptors from a compile-time sampling pattern.
// Deterministic for identical input. ImageTooSmall below 32x32.
Result<FeatureSet> detect_and_describe(const GrayImage& img, int max_keypoints);

// Descriptor expanded to 256 floats (one per bit), for the L2 matching path;
// squared L2 distance then equals Hamming distance.
std::vector<float> descriptor_to_float(const Descriptor256& d);

}  // namespace manip
