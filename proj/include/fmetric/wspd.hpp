#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "fmetric/metric.hpp"
#include "fmetric/spanner.hpp"

namespace fmetric {

enum class WspdBackend { quadtree, covertree };

std::string_view to_string(WspdBackend backend);
WspdBackend parse_wspd_backend(std::string_view name);

/// Two disjoint, non-empty index sets. rep_a and rep_b are the lowest
/// indices of their sets, and rep_a < rep_b.
struct WspdPair {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
  std::size_t rep_a;
  std::size_t rep_b;
};

struct Wspd {
  std::size_t n = 0;
  double separation = 0.0;
  WspdBackend backend = WspdBackend::quadtree;
  std::vector<WspdPair> pairs;
  /// Exact distances requested while building (cover tree only).
  std::uint64_t backend_queries = 0;
};

inline constexpr double kCoverTreeBase = 1.3;
inline constexpr std::size_t kQuadtreeMaxDim = 64;

/// Pairs {A_k, B_k} with d(a, b) >= separation * max(diam A_k, diam B_k)
/// for all a in A_k, b in B_k, such that every unordered pair of distinct
/// points lies in exactly one {A_k, B_k}. Fewer than two points gives an
/// empty decomposition.
///
/// The quadtree backend reads coordinates and issues no distance queries.
/// The cover-tree backend only uses the oracle, memoizing what it asks for.
Wspd build_wspd(DistanceOracle& oracle, double separation, WspdBackend backend);

/// Spanner with one edge per pair of a (16/eps)-separated decomposition,
/// between the pair's representatives. eps must lie in (0, 1]. queries_used
/// is the edge count plus the decomposition's own queries, which are also
/// reported through `backend_queries` when given.
Spanner build_wspd_spanner(DistanceOracle& oracle, double eps, WspdBackend backend,
                           std::uint64_t* backend_queries = nullptr);

/// `n s backend`, then one `sizeA sizeB repA repB` line per pair.
void write_wspd(std::ostream& out, const Wspd& wspd);

}  // namespace fmetric
