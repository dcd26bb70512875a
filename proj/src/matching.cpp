#include "manip/matching.hpp"

#include <limits>

#include "manip/kdtree.hpp"

namespace manip {

namespace {

Result<std::vector<TwoNn>> check_inputs(const std::vector<Descriptor256>& a,
                                        const std::vector<Descriptor256>& b) {
  if (a.empty() || b.empty()) {
    return Result<std::vector<TwoNn>>::failure(Status::EmptyInput, "empty descriptor set");
  }
  return Result<std::vector<TwoNn>>::success({});
}

}  // namespace

Result<std::vector<Match>> hamming_bruteforce_match(const std::vector<Descriptor256>& a,
                                                    const std::vector<Descriptor256>& b) {
  if (a.empty() || b.empty()) {
    return Result<std::vector<Match>>::failure(Status::EmptyInput, "empty descriptor set");
  }
  std::vector<Match> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    int best = std::numeric_limits<int>::max();
    int best_idx = -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      int d = a[i].hamming(b[j]);
      if (d < best) {
        best = d;
        best_idx = static_cast<int>(j);
      }
    }
    out.push_back({static_cast<int>(i), best_idx, static_cast<double>(best)});
  }
  return Result<std::vector<Match>>::success(std::move(out));
}

Result<std::vector<TwoNn>> hamming_two_nn(const std::vector<Descriptor256>& a,
                                          const std::vector<Descriptor256>& b) {
  auto check = check_inputs(a, b);
  if (!check) return check;
  std::vector<TwoNn> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    int d1 = std::numeric_limits<int>::max(), d2 = std::numeric_limits<int>::max();
    int i1 = -1, i2 = -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      int d = a[i].hamming(b[j]);
      if (d < d1) {
        d2 = d1;
        i2 = i1;
        d1 = d;
        i1 = static_cast<int>(j);
      } else if (d < d2) {
        d2 = d;
        i2 = static_cast<int>(j);
      }
    }
    TwoNn entry;
    entry.template_idx = static_cast<int>(i);
    entry.best_idx = i1;
    entry.d1 = d1;
    entry.second_idx = i2;
    entry.d2 = i2 >= 0 ? static_cast<double>(d2) : std::numeric_limits<double>::infinity();
    out.push_back(entry);
  }
  return Result<std::vector<TwoNn>>::success(std::move(out));
}

Result<std::vector<TwoNn>> kdtree_two_nn(const std::vector<Descriptor256>& a,
                                         const std::vector<Descriptor256>& b) {
  auto check = check_inputs(a, b);
  if (!check) return check;
  std::vector<std::vector<float>> points;
  points.reserve(b.size());
  for (const auto& d : b) points.push_back(descriptor_to_float(d));
  auto tree = KdTree::build(std::move(points));
  if (!tree) return Result<std::vector<TwoNn>>::failure(tree.status, tree.message);

  std::vector<TwoNn> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto nn = tree->knn(descriptor_to_float(a[i]), 2);
    if (!nn) return Result<std::vector<TwoNn>>::failure(nn.status, nn.message);
    TwoNn entry;
    entry.template_idx = static_cast<int>(i);
    entry.best_idx = (*nn)[0].index;
    entry.d1 = (*nn)[0].dist2;
    if (nn->size() > 1) {
      entry.second_idx = (*nn)[1].index;
      entry.d2 = (*nn)[1].dist2;
    } else {
      entry.second_idx = -1;
      entry.d2 = std::numeric_limits<double>::infinity();
    }
    out.push_back(entry);
  }
  return Result<std::vector<TwoNn>>::success(std::move(out));
}

MatchResult ratio_filter(const std::vector<TwoNn>& rated, double ratio) {
  MatchResult out;
  for (const TwoNn& entry : rated) {
    if (entry.d2 == 0.0) {
      ++out.degenerate_count;
      continue;
    }
    if (entry.d1 < ratio * entry.d2) {
      out.matches.push_back({entry.template_idx, entry.best_idx, entry.d1});
    }
  }
  return out;
}

}  // namespace manip
