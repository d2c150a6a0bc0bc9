#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fmetric {

/// Explicit cover tree over point indices 0..n-1 for an arbitrary metric,
/// built by repeated insertion. Each point owns one node; a node at level i
/// implicitly repeats at every lower level (nesting). Invariants, with
/// base tau:
///   covering   - a child at level l lies within tau^(l+1) of its parent;
///   separation - nodes present at level l are pairwise more than tau^l apart.
/// Points at distance 0 from an existing node are kept as its duplicates.
class CoverTree {
 public:
  using DistanceFn = std::function<double(std::size_t, std::size_t)>;

  struct Node {
    std::size_t point;
    int level;
    std::vector<std::size_t> children;  // node ids, decreasing level
    std::vector<std::size_t> duplicates;
    double parent_distance = 0.0;
    double radius = 0.0;  // max distance from point to any descendant (upper bound)
  };

  CoverTree(std::size_t n, const DistanceFn& distance, double base = 1.3);

  double base() const noexcept { return base_; }
  std::size_t root() const noexcept { return root_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::size_t id) const { return nodes_[id]; }
  double scale(int level) const;

  /// Every point index in the subtree of `id`, duplicates included.
  std::vector<std::size_t> subtree_points(std::size_t id) const;

 private:
  void insert(std::size_t point, const DistanceFn& distance);
  void finalize(std::size_t id);

  double base_;
  std::size_t root_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace fmetric
