#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace fmetric {

/// Undirected weighted adjacency list.
class Graph {
 public:
  struct Arc {
    std::size_t to;
    double weight;
  };

  explicit Graph(std::size_t n) : adj_(n) {}

  std::size_t size() const noexcept { return adj_.size(); }
  void add_edge(std::size_t u, std::size_t v, double w) {
    adj_[u].push_back({v, w});
    adj_[v].push_back({u, w});
  }
  const std::vector<Arc>& neighbors(std::size_t u) const { return adj_[u]; }

 private:
  std::vector<std::vector<Arc>> adj_;
};

/// Distances from `source` to every vertex (infinity if unreachable).
std::vector<double> shortest_paths(const Graph& g, std::size_t source);

/// Distance from `source` to `target` if it is at most `limit`, otherwise
/// some value > limit. Stops as soon as the answer is decided.
double bounded_distance(const Graph& g, std::size_t source, std::size_t target, double limit);

}  // namespace fmetric
