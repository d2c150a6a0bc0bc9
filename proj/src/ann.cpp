#include "fmetric/ann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fmetric/error.hpp"
#include "fmetric/rng.hpp"

namespace fmetric {

PairwiseDistances::PairwiseDistances(std::shared_ptr<const PointSet> points,
                                     std::size_t dense_limit)
    : points_(std::move(points)) {
  if (!points_) throw InvalidArgument("pairwise distances need a point set");
  const std::size_t n = points_->size();
  if (n > dense_limit) return;
  matrix_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      matrix_[i * n + j] = matrix_[j * n + i] = euclidean(points_->point(i), points_->point(j));
}

AnnInstance make_ann_instance(std::shared_ptr<const PointSet> points, std::vector<double> query,
                              double eps, std::shared_ptr<const PairwiseDistances> pairwise) {
  if (!points) throw InvalidArgument("ANN instance needs a point set");
  if (query.size() != points->dim()) throw InvalidArgument("query point dimension mismatch");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("ANN eps must be >= 0");
  if (!pairwise) pairwise = std::make_shared<const PairwiseDistances>(points);
  std::vector<std::size_t> active(points->size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  return {std::move(points), std::move(pairwise), std::move(query), eps, std::move(active)};
}

void update_lower_bounds(AnnState& state, const PairwiseDistances& pairwise,
                         std::size_t position, double r) {
  const std::size_t from = state.order[position];
  for (std::size_t k = position + 1; k < state.order.size(); ++k) {
    const double bound = std::abs(pairwise(from, state.order[k]) - r);
    if (bound > state.lower[k]) state.lower[k] = bound;
  }
}

AnnResult ann_search(const AnnInstance& instance, DistanceOracle& oracle, std::uint64_t seed) {
  if (instance.active.empty()) throw InvalidArgument("ANN search over an empty point set");
  if (&oracle.points() != instance.points.get() && oracle.points() != *instance.points)
    throw InvalidArgument("oracle and instance use different point sets");

  AnnResult result;
  result.permutation_seed = seed;
  AnnState state{instance.active, std::vector<double>(instance.active.size(), 0.0)};
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(state.order));

  const auto query = [&](std::size_t position) {
    const std::size_t index = state.order[position];
    const double r = oracle.query_point(instance.query, index);
    result.query_log.push_back({index, r});
    update_lower_bounds(state, *instance.pairwise, position, r);
    return r;
  };

  result.candidate = state.order[0];
  result.distance = query(0);
  const double shrink = 1.0 + instance.eps;
  for (std::size_t i = 1; i < state.order.size(); ++i) {
    if (state.lower[i] >= result.distance / shrink) continue;
    const double r = query(i);
    if (r < result.distance) {
      result.candidate = state.order[i];
      result.distance = r;
    }
  }
  result.queries_used = result.query_log.size();
  result.order = std::move(state.order);
  return result;
}

std::pair<std::size_t, double> brute_force_nn(const AnnInstance& instance,
                                              DistanceOracle& oracle) {
  if (instance.active.empty()) throw InvalidArgument("nearest neighbor of an empty point set");
  std::size_t best = instance.active.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i : instance.active) {
    const double d = oracle.query_point(instance.query, i);
    if (d < best_d || (d == best_d && i < best)) {
      best = i;
      best_d = d;
    }
  }
  return {best, best_d};
}

AnnInstance prefilter_with_approx(const AnnInstance& instance,
                                  std::span<const double> approx_to_query) {
  if (approx_to_query.size() != instance.points->size())
    throw InvalidArgument("need one approximate distance per point");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i : instance.active) m = std::min(m, approx_to_query[i]);
  AnnInstance reduced = instance;
  reduced.active.clear();
  for (std::size_t i : instance.active)
    if (approx_to_query[i] <= 2.0 * m) reduced.active.push_back(i);
  return reduced;
}

AnnInstance prefilter_with_approx(const AnnInstance& instance, const DistanceOracle& oracle) {
  return prefilter_with_approx(instance, oracle.approx_to_query(instance.query));
}

}  // namespace fmetric
