#include <doctest.h>

#include <algorithm>
#include <memory>
#include <numeric>

#include "fmetric/ann.hpp"
#include "fmetric/error.hpp"
#include "fmetric/harness.hpp"
#include "fmetric/metric.hpp"
#include "fmetric/rng.hpp"
#include "oracles.hpp"

using namespace fmetric;

namespace {

std::shared_ptr<const PointSet> make(std::size_t dim, std::vector<double> coords) {
  return std::make_shared<const PointSet>(dim, std::move(coords));
}

}  // namespace

TEST_CASE("single point") {
  auto p = make(2, {4, 4});
  DistanceOracle o(p);
  const AnnResult r = ann_search(make_ann_instance(p, {0, 0}, 0.1), o, 3);
  CHECK(r.candidate == 0);
  CHECK(r.queries_used == 1);
  CHECK(r.distance == doctest::Approx(std::sqrt(32.0)));
}

// Points 0, 10, 11 and q = 1 with eps = 0. When 0 comes first: r = 1, then
// the bounds |10 - 1| = 9 and |11 - 1| = 10 are both >= 1, so both are skipped.
TEST_CASE("one query suffices when the nearest point comes first") {
  auto p = make(1, {0, 10, 11});
  const AnnInstance inst = make_ann_instance(p, {1}, 0.0);
  int traced = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    DistanceOracle o(p);
    const AnnResult r = ann_search(inst, o, seed);
    CHECK(r.candidate == 0);
    CHECK(r.distance == 1.0);
    CHECK(r.queries_used == r.query_log.size());
    CHECK(o.query_point_count() == r.queries_used);
    if (r.order.front() == 0) {
      ++traced;
      CHECK(r.queries_used == 1);
      REQUIRE(r.query_log.size() == 1);
      CHECK(r.query_log[0].index == 0);
      CHECK(r.query_log[0].distance == 1.0);
    }
  }
  CHECK(traced > 0);
}

TEST_CASE("query equal to the first visited point stops all queries") {
  const PointSet base = generate_pointset(Generator::normal, 3, 50, 2);
  auto p = std::make_shared<const PointSet>(base);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DistanceOracle o(p);
    const AnnInstance probe = make_ann_instance(p, {0, 0, 0}, 0.01);
    const std::size_t first = ann_search(probe, o, seed).order.front();
    const auto q = base.point(first);
    DistanceOracle o2(p);
    const AnnResult r =
        ann_search(make_ann_instance(p, std::vector<double>(q.begin(), q.end()), 0.01), o2, seed);
    CHECK(r.candidate == first);
    CHECK(r.distance == 0.0);
    CHECK(r.queries_used == 1);
  }
}

TEST_CASE("update_lower_bounds") {
  auto p = make(1, {0, 3, 7, 12});
  const PairwiseDistances pw(p);
  AnnState s{{2, 0, 3, 1}, {0, 0, 0, 0}};
  update_lower_bounds(s, pw, 0, 0.0);  // q at point 2
  CHECK(s.lower == std::vector<double>{0, 7, 5, 4});
  update_lower_bounds(s, pw, 1, 7.0);  // |d(0,k) - 7|: d(0,12) = 12 -> 5, d(0,3) = 3 -> 4
  CHECK(s.lower == std::vector<double>{0, 7, 5, 4});
  AnnState t{{0, 1, 2, 3}, {0, 0, 0, 9}};
  update_lower_bounds(t, pw, 1, 4.0);  // |d(3,7) - 4| = 0, |d(3,12) - 4| = 5 < 9
  CHECK(t.lower == std::vector<double>{0, 0, 0, 9});
}

TEST_CASE("lower bounds never exceed true distances") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = std::make_shared<const PointSet>(
        generate_pointset(static_cast<Generator>(trial % 4), 1 + trial % 5, 10, trial));
    const PairwiseDistances pw(p);
    std::vector<double> q(p->dim());
    for (double& x : q) x = rng.normal() * 5;
    AnnState s;
    s.order.resize(10);
    std::iota(s.order.begin(), s.order.end(), std::size_t{0});
    rng.shuffle(std::span(s.order));
    s.lower.assign(10, 0.0);
    // Cancellation in |d(i,k) - r| is relative to the coordinate scale.
    double scale = 1.0;
    for (double x : p->coords()) scale = std::max(scale, std::abs(x));
    for (double x : q) scale = std::max(scale, std::abs(x));
    for (std::size_t pos = 0; pos < 10; ++pos) {
      update_lower_bounds(s, pw, pos, euclidean(p->point(s.order[pos]), q));
      for (std::size_t k = 0; k < 10; ++k)
        CHECK(s.lower[k] <= euclidean(p->point(s.order[k]), q) + 1e-12 * scale);
    }
  }
}

TEST_CASE("brute force nearest neighbor") {
  auto p = make(2, {5, 5, 1, 1, 1, 1, 3, 3});
  DistanceOracle o(p);
  const auto [idx, d] = brute_force_nn(make_ann_instance(p, {1, 1}, 0.0), o);
  CHECK(idx == 1);
  CHECK(d == 0.0);
  CHECK(o.query_point_count() == 4);
}

TEST_CASE("prefilter keeps points within twice the smallest approximation") {
  auto p = make(1, {0, 1, 2});
  const AnnInstance inst = make_ann_instance(p, {0.5}, 0.1);
  const std::vector<double> approx{3, 5, 7};
  CHECK(prefilter_with_approx(inst, approx).active == std::vector<std::size_t>{0, 1});
  auto single = make(1, {4});
  const AnnInstance one = make_ann_instance(single, {0}, 0.1);
  CHECK(prefilter_with_approx(one, std::vector<double>{8}).active == std::vector<std::size_t>{0});
}

TEST_CASE("the true nearest neighbor survives the prefilter") {
  for (int trial = 0; trial < 200; ++trial) {
    auto p = std::make_shared<const PointSet>(
        generate_pointset(static_cast<Generator>(trial % 4), 1 + trial % 6, 80, trial));
    const auto q = generate_query(trial % 2 ? QueryDist::normal : QueryDist::uniform, p->dim(),
                                  trial);
    DistanceOracle o(p, trial);
    const AnnInstance inst = prefilter_with_approx(make_ann_instance(p, q, 0.01), o);
    const auto nn = oracle::nearest(*p, q).first;
    CHECK(std::find(inst.active.begin(), inst.active.end(), nn) != inst.active.end());
    CHECK(o.query_point_count() == 0);
    const AnnResult r = ann_search(inst, o, trial);
    CHECK(r.distance <= 1.01 * oracle::nearest(*p, q).second + 1e-12);
  }
}

TEST_CASE("approximation guarantee, pruning rule, determinism") {
  std::size_t runs = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const double eps = std::array{0.0, 0.01, 0.1}[trial % 3];
    auto p = std::make_shared<const PointSet>(
        generate_pointset(static_cast<Generator>(trial % 4), 1 + trial % 10, 150, trial));
    const auto q = generate_query(QueryDist::uniform, p->dim(), trial);
    const AnnInstance inst = make_ann_instance(p, q, eps);
    const auto [nn, best] = oracle::nearest(*p, q);
    for (std::uint64_t seed = 0; seed < 5; ++seed, ++runs) {
      DistanceOracle o(p);
      const AnnResult r = ann_search(inst, o, seed);
      CHECK(r.distance <= (1 + eps) * best + 1e-12);
      CHECK(r.distance == euclidean(p->point(r.candidate), q));
      if (eps == 0.0) CHECK(r.distance == best);
      CHECK(oracle::pruning_violations(r, *p, eps) == 0);
      double v = oracle::kInf;
      for (const auto& rec : r.query_log) v = std::min(v, rec.distance);
      CHECK(v == r.distance);
      DistanceOracle o2(p);
      const AnnResult again = ann_search(inst, o2, seed);
      CHECK(again.order == r.order);
      CHECK(again.query_log.size() == r.query_log.size());
    }
  }
  CHECK(runs == 600);
}

TEST_CASE("instance validation") {
  auto p = make(2, {0, 0, 1, 1});
  CHECK_THROWS_AS(make_ann_instance(p, {0}, 0.1), InvalidArgument);
  CHECK_THROWS_AS(make_ann_instance(p, {0, 0}, -0.1), InvalidArgument);
  DistanceOracle other(make(2, {5, 5, 6, 6}));
  CHECK_THROWS_AS(ann_search(make_ann_instance(p, {0, 0}, 0.1), other, 1), InvalidArgument);
}

TEST_CASE("on-demand pairwise distances match the dense matrix") {
  auto p = std::make_shared<const PointSet>(generate_pointset(Generator::exp, 3, 40, 1));
  const PairwiseDistances dense(p), lazy(p, 10);
  CHECK(dense.dense());
  CHECK_FALSE(lazy.dense());
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j) CHECK(dense(i, j) == lazy(i, j));
}
