#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "fmetric/metric.hpp"

namespace fmetric {

/// Exact point-to-point distances, free of charge for nearest-neighbor
/// search. Stored as a dense matrix up to `dense_limit` points; above that
/// each entry is evaluated on demand with the same metric, which yields the
/// same values without the n^2 memory.
class PairwiseDistances {
 public:
  explicit PairwiseDistances(std::shared_ptr<const PointSet> points,
                             std::size_t dense_limit = 4096);

  std::size_t size() const noexcept { return points_->size(); }
  bool dense() const noexcept { return !matrix_.empty(); }
  double operator()(std::size_t i, std::size_t j) const {
    if (dense()) return matrix_[i * size() + j];
    return i == j ? 0.0 : euclidean(points_->point(i), points_->point(j));
  }

 private:
  std::shared_ptr<const PointSet> points_;
  std::vector<double> matrix_;
};

struct AnnInstance {
  std::shared_ptr<const PointSet> points;
  std::shared_ptr<const PairwiseDistances> pairwise;
  std::vector<double> query;
  double eps = 0.0;
  /// Indices the search may return; all points unless prefiltered.
  std::vector<std::size_t> active;
};

AnnInstance make_ann_instance(std::shared_ptr<const PointSet> points, std::vector<double> query,
                              double eps,
                              std::shared_ptr<const PairwiseDistances> pairwise = nullptr);

struct QueryRecord {
  std::size_t index;
  double distance;
};

struct AnnResult {
  std::size_t candidate = 0;
  double distance = 0.0;
  std::uint64_t queries_used = 0;
  std::uint64_t permutation_seed = 0;
  std::vector<std::size_t> order;       // the permutation that was processed
  std::vector<QueryRecord> query_log;   // computed distances, in order
};

/// Lower bounds on d(p, q) for the points of a permutation.
struct AnnState {
  std::vector<std::size_t> order;
  std::vector<double> lower;  // by position in `order`
};

/// After r = d(order[position], q) has been computed, raise the bound of
/// every later position k to |d(order[position], order[k]) - r|.
void update_lower_bounds(AnnState& state, const PairwiseDistances& pairwise,
                         std::size_t position, double r);

/// Randomized incremental search: visit the active points in a permutation
/// drawn from `seed`, skip a point when its lower bound is at least
/// v / (1 + eps) for the current candidate distance v, otherwise query it.
/// The result is within (1 + eps) of the nearest distance; eps = 0 is exact.
AnnResult ann_search(const AnnInstance& instance, DistanceOracle& oracle, std::uint64_t seed);

/// Lowest-index nearest active point; queries every active point.
std::pair<std::size_t, double> brute_force_nn(const AnnInstance& instance,
                                              DistanceOracle& oracle);

/// Keep only points whose approximate distance to the query is at most
/// twice the smallest one. The nearest neighbor always survives.
AnnInstance prefilter_with_approx(const AnnInstance& instance, const DistanceOracle& oracle);

/// As above with the approximate distances given explicitly (indexed by point).
AnnInstance prefilter_with_approx(const AnnInstance& instance,
                                  std::span<const double> approx_to_query);

}  // namespace fmetric
