#include "fmetric/graph.hpp"

#include <functional>
#include <queue>
#include <utility>

namespace fmetric {

namespace {

constexpr double kUnreached = std::numeric_limits<double>::infinity();
using Entry = std::pair<double, std::size_t>;
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

// Reused across bounded searches; entries touched by a search are reset afterwards.
struct Workspace {
  std::vector<double> dist;
  std::vector<std::size_t> touched;
};

}  // namespace

std::vector<double> shortest_paths(const Graph& g, std::size_t source) {
  std::vector<double> dist(g.size(), kUnreached);
  MinHeap heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : g.neighbors(u)) {
      const double nd = d + arc.weight;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        heap.push({nd, arc.to});
      }
    }
  }
  return dist;
}

double bounded_distance(const Graph& g, std::size_t source, std::size_t target, double limit) {
  if (source == target) return 0.0;
  thread_local Workspace ws;
  if (ws.dist.size() < g.size()) ws.dist.assign(g.size(), kUnreached);

  MinHeap heap;
  double result = kUnreached;
  ws.dist[source] = 0.0;
  ws.touched.push_back(source);
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > ws.dist[u]) continue;
    if (u == target) {
      result = d;
      break;
    }
    for (const auto& arc : g.neighbors(u)) {
      const double nd = d + arc.weight;
      if (nd <= limit && nd < ws.dist[arc.to]) {
        if (ws.dist[arc.to] == kUnreached) ws.touched.push_back(arc.to);
        ws.dist[arc.to] = nd;
        heap.push({nd, arc.to});
      }
    }
  }
  for (std::size_t v : ws.touched) ws.dist[v] = kUnreached;
  ws.touched.clear();
  return result;
}

}  // namespace fmetric
