#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace manip {

// Splitmix64 finalizer over (seed, index); used to derive independent
// sub-streams for chunks, iterations, and trials.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// mt19937_64 raw output is pinned by the standard; the standard distribution
// adapters are not, so value mappings are done manually.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n); bias is below 2^-50 for n < 2^13, irrelevant at our set sizes.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

  double gaussian(double sigma = 1.0) {
    // Box-Muller with a fresh pair per call; no cached spare, so the draw
    // count per call is fixed and sub-stream splits stay reproducible.
    double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace manip
