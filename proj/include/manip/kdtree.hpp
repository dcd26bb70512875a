#pragma once

#include <vector>

#include "manip/error.hpp"

namespace manip {

// Exact k-d tree over equal-length float vectors, squared-L2 metric.
// Results are totally ordered by (dist2, index), and pruning descends on
// boundary equality, so every query reproduces a linear scan exactly.
class KdTree {
 public:
  struct Neighbor {
    double dist2 = 0.0;
    int index = -1;
  };

  static Result<KdTree> build(std::vector<std::vector<float>> points);

  Result<std::vector<Neighbor>> knn(const std::vector<float>& query, int k) const;

  int size() const { return static_cast<int>(pts_.size()); }
  int dim() const { return dim_; }

  // Reference metric shared with callers and tests: accumulation order is the
  // definition of the tie-exact distance.
  static double dist2(const std::vector<float>& a, const std::vector<float>& b);

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build_range(std::vector<int>& order, int lo, int hi, int depth);
  void search(int node, const std::vector<float>& query, int k,
              std::vector<Neighbor>& best) const;

  std::vector<std::vector<float>> pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int dim_ = 0;
};

}  // namespace manip
