#pragma once

#include <vector>

#include "manip/error.hpp"
#include "manip/features.hpp"

namespace manip {

struct Match {
  int template_idx = -1;
  int frame_idx = -1;
  double distance = 0.0;  // Hamming bits on both matching paths
};

// Best and second-best frame candidates for one template descriptor.
struct TwoNn {
  int template_idx = -1;
  int best_idx = -1;
  double d1 = 0.0;
  int second_idx = -1;
  double d2 = 0.0;  // +inf when only one candidate exists
};

struct MatchResult {
  std::vector<Match> matches;
  int degenerate_count = 0;  // entries dropped because d2 == 0
};

// Nearest frame descriptor for each template descriptor; ties by lowest index.
Result<std::vector<Match>> hamming_bruteforce_match(const std::vector<Descriptor256>& a,
                                                    const std::vector<Descriptor256>& b);

Result<std::vector<TwoNn>> hamming_two_nn(const std::vector<Descriptor256>& a,
                                          const std::vector<Descriptor256>& b);

// Same 2-NN contract through the exact k-d tree over 0/1-expanded descriptors
// (squared L2 there equals Hamming bits, so results are identical).
Result<std::vector<TwoNn>> kdtree_two_nn(const std::vector<Descriptor256>& a,
                                         const std::vector<Descriptor256>& b);

// Keeps entries with d1 < ratio * d2; entries with d2 == 0 are dropped and
// counted as degenerate.
MatchResult ratio_filter(const std::vector<TwoNn>& rated, double ratio = 0.7);

}  // namespace manip
