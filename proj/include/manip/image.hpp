#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "manip/error.hpp"

namespace manip {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major

  std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

// 16-bit depth in units of the camera's depth_scale; 0 means invalid.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> data;

  std::uint16_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Binary PGM (P5). 8-bit for gray images; depth maps use maxval 65535 with
// big-endian sample bytes.
Result<GrayImage> load_pgm8(const std::string& path);
Result<bool> write_pgm8(const GrayImage& img, const std::string& path);
Result<DepthMap> load_pgm16(const std::string& path);
Result<bool> write_pgm16(const DepthMap& depth, const std::string& path);

}  // namespace manip
