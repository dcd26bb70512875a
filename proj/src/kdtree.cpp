#include "manip/kdtree.hpp"

#include <algorithm>

namespace manip {

double KdTree::dist2(const std::vector<float>& a, const std::vector<float>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

Result<KdTree> KdTree::build(std::vector<std::vector<float>> points) {
  if (points.empty()) {
    return Result<KdTree>::failure(Status::EmptyInput, "empty tree");
  }
  KdTree tree;
  tree.dim_ = static_cast<int>(points.front().size());
  if (tree.dim_ == 0) {
    return Result<KdTree>::failure(Status::InvalidArgument, "zero-dimensional points");
  }
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != tree.dim_) {
      return Result<KdTree>::failure(Status::InvalidArgument, "inconsistent point dimensions");
    }
  }
  tree.pts_ = std::move(points);
  tree.nodes_.reserve(tree.pts_.size());
  std::vector<int> order(tree.pts_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  tree.root_ = tree.build_range(order, 0, static_cast<int>(order.size()), 0);
  return Result<KdTree>::success(std::move(tree));
}

int KdTree::build_range(std::vector<int>& order, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  int axis = depth % dim_;
  std::sort(order.begin() + lo, order.begin() + hi, [&](int a, int b) {
    if (pts_[a][axis] != pts_[b][axis]) return pts_[a][axis] < pts_[b][axis];
    return a < b;
  });
  int mid = lo + (hi - lo) / 2;
  Node node;
  node.point = order[mid];
  node.axis = axis;
  int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  nodes_[self].left = build_range(order, lo, mid, depth + 1);
  nodes_[self].right = build_range(order, mid + 1, hi, depth + 1);
  return self;
}

Result<std::vector<KdTree::Neighbor>> KdTree::knn(const std::vector<float>& query,
                                                  int k) const {
  if (k < 1) {
    return Result<std::vector<Neighbor>>::failure(Status::InvalidArgument, "k must be >= 1");
  }
  if (static_cast<int>(query.size()) != dim_) {
    return Result<std::vector<Neighbor>>::failure(Status::InvalidArgument,
                                                  "query dimension mismatch");
  }
  std::vector<Neighbor> best;
  best.reserve(static_cast<std::size_t>(std::min<int>(k, size())));
  search(root_, query, k, best);
  return Result<std::vector<Neighbor>>::success(std::move(best));
}

void KdTree::search(int node_idx, const std::vector<float>& query, int k,
                    std::vector<Neighbor>& best) const {
  if (node_idx < 0) return;
  const Node& node = nodes_[node_idx];

  Neighbor cand{dist2(query, pts_[node.point]), node.point};
  auto less = [](const Neighbor& a, const Neighbor& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.index < b.index;
  };
  if (static_cast<int>(best.size()) < k) {
    best.insert(std::upper_bound(best.begin(), best.end(), cand, less), cand);
  } else if (less(cand, best.back())) {
    best.pop_back();
    best.insert(std::upper_bound(best.begin(), best.end(), cand, less), cand);
  }

  double diff = static_cast<double>(query[node.axis]) -
                static_cast<double>(pts_[node.point][node.axis]);
  int near = diff < 0.0 ? node.left : node.right;
  int far = diff < 0.0 ? node.right : node.left;
  search(near, query, k, best);
  // On boundary equality a far-side point can still win a tie on index, so
  // only a strictly larger plane distance prunes.
  if (static_cast<int>(best.size()) < k || diff * diff <= best.back().dist2) {
    search(far, query, k, best);
  }
}

}  // namespace manip
