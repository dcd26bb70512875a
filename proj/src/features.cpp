#include "manip/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace manip {

int Descriptor256::hamming(const Descriptor256& other) const {
  int d = 0;
  for (int i = 0; i < 4; ++i) d += std::popcount(words[i] ^ other.words[i]);
  return d;
}

std::vector<float> descriptor_to_float(const Descriptor256& d) {
  std::vector<float> out(256);
  for (int b = 0; b < 256; ++b) {
    out[b] = (d.words[b >> 6] >> (b & 63)) & 1 ? 1.0f : 0.0f;
  }
  return out;
}

namespace {

constexpr int kPatchRadius = 15;
// Rotated pattern offsets stay within ceil(15 * sqrt(2)) = 22 of the center.
constexpr int kBorder = 24;

struct PatternPair {
  std::int8_t x1, y1, x2, y2;
};

// Fixed comparison pattern baked at compile time so descriptors are stable
// across runs and platforms.
constexpr std::array<PatternPair, 256> make_pattern() {
  std::array<PatternPair, 256> pattern{};
  std::uint64_t state = 0x853c49e6748fea9bULL;
  auto next = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<int>((state >> 33) % (2 * kPatchRadius + 1)) - kPatchRadius;
  };
  for (auto& p : pattern) {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    do {
      x1 = next();
      y1 = next();
    } while (x1 * x1 + y1 * y1 > kPatchRadius * kPatchRadius);
    do {
      x2 = next();
      y2 = next();
    } while (x2 * x2 + y2 * y2 > kPatchRadius * kPatchRadius ||
             (x2 == x1 && y2 == y1));
    p = {static_cast<std::int8_t>(x1), static_cast<std::int8_t>(y1),
         static_cast<std::int8_t>(x2), static_cast<std::int8_t>(y2)};
  }
  return pattern;
}

constexpr std::array<PatternPair, 256> kPattern = make_pattern();

using FloatImage = std::vector<float>;

FloatImage gaussian_blur(const FloatImage& src, int w, int h, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<float> kernel(2 * radius + 1);
  float sum = 0.0f;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = static_cast<float>(std::exp(-0.5 * i * i / (sigma * sigma)));
    sum += kernel[i + radius];
  }
  for (float& k : kernel) k /= sum;

  auto reflect = [](int i, int n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
    return i;
  };

  FloatImage tmp(src.size()), dst(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * src[static_cast<std::size_t>(y) * w + reflect(x + i, w)];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * tmp[static_cast<std::size_t>(reflect(y + i, h)) * w + x];
      }
      dst[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return dst;
}

}  // namespace

Result<FeatureSet> detect_and_describe(const GrayImage& img, int max_keypoints) {
  if (img.width < 32 || img.height < 32) {
    return Result<FeatureSet>::failure(Status::ImageTooSmall, "detection needs at least 32x32");
  }
  if (max_keypoints < 1) {
    return Result<FeatureSet>::failure(Status::InvalidArgument, "max_keypoints must be >= 1");
  }
  const int w = img.width, h = img.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  FloatImage gray(n);
  for (std::size_t i = 0; i < n; ++i) gray[i] = static_cast<float>(img.data[i]);
  FloatImage smooth = gaussian_blur(gray, w, h, 2.0);

  auto at = [w](const FloatImage& f, int x, int y) -> float {
    return f[static_cast<std::size_t>(y) * w + x];
  };

  // Central-difference structure tensor, then a Gaussian window.
  FloatImage ixx(n, 0.0f), iyy(n, 0.0f), ixy(n, 0.0f);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      float gx = 0.5f * (at(smooth, x + 1, y) - at(smooth, x - 1, y));
      float gy = 0.5f * (at(smooth, x, y + 1) - at(smooth, x, y - 1));
      std::size_t idx = static_cast<std::size_t>(y) * w + x;
      ixx[idx] = gx * gx;
      iyy[idx] = gy * gy;
      ixy[idx] = gx * gy;
    }
  }
  ixx = gaussian_blur(ixx, w, h, 2.0);
  iyy = gaussian_blur(iyy, w, h, 2.0);
  ixy = gaussian_blur(ixy, w, h, 2.0);

  FloatImage response(n, 0.0f);
  float max_response = 0.0f;
  for (std::size_t i = 0; i < n; ++i) {
    float det = ixx[i] * iyy[i] - ixy[i] * ixy[i];
    float tr = ixx[i] + iyy[i];
    response[i] = det - 0.04f * tr * tr;
    max_response = std::max(max_response, response[i]);
  }

  FeatureSet out;
  if (max_response <= 0.0f) {
    return Result<FeatureSet>::success(std::move(out));  // featureless image
  }
  const float threshold = 0.01f * max_response;

  struct Candidate {
    double u, v, response, orientation;
  };
  std::vector<Candidate> candidates;
  for (int y = kBorder; y < h - kBorder; ++y) {
    for (int x = kBorder; x < w - kBorder; ++x) {
      float r = at(response, x, y);
      if (r <= threshold) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (at(response, x + dx, y + dy) > r) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;

      // One-dimensional parabola refinement along each axis.
      auto refine = [](float rm, float r0, float rp) {
        float denom = rm - 2.0f * r0 + rp;
        if (std::abs(denom) < 1e-12f) return 0.0;
        double d = 0.5 * (rm - rp) / denom;
        return std::clamp(d, -0.5, 0.5);
      };
      double du = refine(at(response, x - 1, y), r, at(response, x + 1, y));
      double dv = refine(at(response, x, y - 1), r, at(response, x, y + 1));

      // Intensity-centroid orientation over the descriptor patch.
      double m10 = 0.0, m01 = 0.0;
      for (int py = -kPatchRadius; py <= kPatchRadius; ++py) {
        for (int px = -kPatchRadius; px <= kPatchRadius; ++px) {
          if (px * px + py * py > kPatchRadius * kPatchRadius) continue;
          double val = at(smooth, x + px, y + py);
          m10 += px * val;
          m01 += py * val;
        }
      }
      candidates.push_back({x + du, y + dv, static_cast<double>(r), std::atan2(m01, m10)});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.response != b.response) return a.response > b.response;
    if (a.v != b.v) return a.v < b.v;
    return a.u < b.u;
  });
  if (static_cast<int>(candidates.size()) > max_keypoints) {
    candidates.resize(max_keypoints);
  }

  out.keypoints.reserve(candidates.size());
  out.descriptors.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    out.keypoints.push_back({c.u, c.v, c.response, c.orientation});

    const int cx = static_cast<int>(std::lround(c.u));
    const int cy = static_cast<int>(std::lround(c.v));
    const double cos_t = std::cos(c.orientation);
    const double sin_t = std::sin(c.orientation);
    Descriptor256 desc;
    for (int b = 0; b < 256; ++b) {
      const PatternPair& p = kPattern[b];
      int x1 = cx + static_cast<int>(std::lround(cos_t * p.x1 - sin_t * p.y1));
      int y1 = cy + static_cast<int>(std::lround(sin_t * p.x1 + cos_t * p.y1));
      int x2 = cx + static_cast<int>(std::lround(cos_t * p.x2 - sin_t * p.y2));
      int y2 = cy + static_cast<int>(std::lround(sin_t * p.x2 + cos_t * p.y2));
      if (at(smooth, x1, y1) < at(smooth, x2, y2)) {
        desc.words[b >> 6] |= 1ULL << (b & 63);
      }
    }
    out.descriptors.push_back(desc);
  }
  return Result<FeatureSet>::success(std::move(out));
}

}  // namespace manip
