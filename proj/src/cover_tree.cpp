#include "fmetric/cover_tree.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>

#include "fmetric/error.hpp"

namespace fmetric {

namespace {

constexpr double kFar = std::numeric_limits<double>::infinity();

struct Candidate {
  std::size_t node;
  double distance;
};

}  // namespace

CoverTree::CoverTree(std::size_t n, const DistanceFn& distance, double base) : base_(base) {
  if (!(base > 1.0)) throw InvalidArgument("cover tree base must exceed 1");
  if (n == 0) throw InvalidArgument("cover tree needs at least one point");
  nodes_.push_back(Node{0, 0, {}, {}, 0.0, 0.0});
  for (std::size_t p = 1; p < n; ++p) insert(p, distance);
  finalize(root_);
}

double CoverTree::scale(int level) const { return std::pow(base_, level); }

// Cover sets are tracked exactly: Q_j holds every node present at level j
// within base^(j+1)/(base-1) of the new point. Any node present at level j-1
// within that radius is Q_j member or a child of one (covering plus the
// geometric sum of radii), so the nearest present node is always in Q_j when
// it matters for the separation test.
void CoverTree::insert(std::size_t point, const DistanceFn& distance) {
  Node& root = nodes_[root_];
  const double d_root = distance(point, root.point);
  if (d_root == 0.0) {
    root.duplicates.push_back(point);
    return;
  }
  if (root.children.empty()) {
    root.level = static_cast<int>(std::ceil(std::log(d_root) / std::log(base_)));
    while (scale(root.level) < d_root) ++root.level;
    while (scale(root.level - 1) >= d_root) --root.level;
  } else {
    while (scale(root.level) < d_root) ++root.level;
  }

  int min_level = INT_MAX;
  for (const auto& node : nodes_) min_level = std::min(min_level, node.level);

  const double reach_factor = base_ / (base_ - 1.0);
  std::vector<std::vector<Candidate>> cover;  // cover[t] is Q at level root.level - t
  cover.push_back({{root_, d_root}});
  int level = nodes_[root_].level;
  int last_covered = level;  // lowest level seen with a present node within base^level

  while (true) {
    const auto& q = cover.back();
    double nearest = kFar;
    for (const auto& c : q) nearest = std::min(nearest, c.distance);
    if (nearest <= scale(level)) last_covered = level;
    else if (level < min_level) break;

    // Q at level - 1: members of q plus their children created at level - 1.
    const int below = level - 1;
    const double reach = scale(below) * reach_factor;
    std::vector<Candidate> next;
    for (const auto& c : q) {
      if (c.distance <= reach) next.push_back(c);
      for (std::size_t child : nodes_[c.node].children) {
        const int child_level = nodes_[child].level;
        if (child_level > below) continue;
        if (child_level < below) break;
        const double d = distance(point, nodes_[child].point);
        if (d == 0.0) {
          nodes_[child].duplicates.push_back(point);
          return;
        }
        if (d <= reach) next.push_back({child, d});
      }
    }
    cover.push_back(std::move(next));
    level = below;
  }

  // Place the point one level below the last level where it was covered; its
  // parent is the nearest node present there.
  const std::size_t t = static_cast<std::size_t>(nodes_[root_].level - last_covered);
  const auto& q = cover[t];
  const Candidate* parent = nullptr;
  for (const auto& c : q)
    if (!parent || c.distance < parent->distance) parent = &c;
  const std::size_t parent_id = parent->node;
  const double parent_distance = parent->distance;

  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{point, last_covered - 1, {}, {}, parent_distance, 0.0});
  auto& siblings = nodes_[parent_id].children;
  const auto pos = std::find_if(siblings.begin(), siblings.end(), [&](std::size_t s) {
    return nodes_[s].level < last_covered - 1;
  });
  siblings.insert(pos, id);
}

void CoverTree::finalize(std::size_t id) {
  double r = 0.0;
  for (std::size_t c : nodes_[id].children) {
    finalize(c);
    r = std::max(r, nodes_[c].parent_distance + nodes_[c].radius);
  }
  nodes_[id].radius = r;
}

std::vector<std::size_t> CoverTree::subtree_points(std::size_t id) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{id};
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    out.push_back(nodes_[u].point);
    out.insert(out.end(), nodes_[u].duplicates.begin(), nodes_[u].duplicates.end());
    stack.insert(stack.end(), nodes_[u].children.begin(), nodes_[u].children.end());
  }
  return out;
}

}  // namespace fmetric
