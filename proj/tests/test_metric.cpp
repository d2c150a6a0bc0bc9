#include <doctest.h>

#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "fmetric/error.hpp"
#include "fmetric/metric.hpp"
#include "fmetric/rng.hpp"
#include "oracles.hpp"

using namespace fmetric;

namespace {

std::shared_ptr<const PointSet> make(std::size_t dim, std::vector<double> coords) {
  return std::make_shared<const PointSet>(dim, std::move(coords));
}

}  // namespace

TEST_CASE("generators respect their ranges and sizes") {
  for (Generator g : {Generator::uniform, Generator::normal, Generator::clustered, Generator::exp}) {
    for (std::size_t dim : {1u, 2u, 5u}) {
      const PointSet p = generate_pointset(g, dim, 37, 11);
      CHECK(p.size() == 37);
      CHECK(p.dim() == dim);
      CHECK(p.label() == std::string(to_string(g)));
      for (double x : p.coords()) CHECK(std::isfinite(x));
    }
  }
  const PointSet one = generate_pointset(Generator::uniform, 2, 1, 5);
  REQUIRE(one.size() == 1);
  for (double x : one.coords()) CHECK((x >= 0.0 && x <= 1.0));

  const PointSet u = generate_pointset(Generator::uniform, 3, 500, 2);
  for (double x : u.coords()) CHECK((x >= 0.0 && x <= 1.0));

  const PointSet e = generate_pointset(Generator::exp, 1, 500, 9);
  for (double x : e.coords()) CHECK((x >= 2.0 && x <= 33554432.0));
}

TEST_CASE("regeneration is bit-identical and seeds matter") {
  for (Generator g : {Generator::uniform, Generator::normal, Generator::clustered, Generator::exp}) {
    CHECK(generate_pointset(g, 3, 40, 77) == generate_pointset(g, 3, 40, 77));
    CHECK_FALSE(generate_pointset(g, 3, 40, 77).coords()[0] ==
                generate_pointset(g, 3, 40, 78).coords()[0]);
  }
}

TEST_CASE("generator arguments are validated") {
  CHECK_THROWS_AS(generate_pointset(Generator::uniform, 0, 5, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_pointset(Generator::uniform, 2, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(parse_generator("gaussian"), InvalidArgument);
  CHECK(parse_generator("exp") == Generator::exp);
}

TEST_CASE("clustered: 100 points use exactly 2 centers") {
  const ClusteredSample s = generate_clustered(2, 100, 3);
  REQUIRE(s.centers.size() == 2);
  REQUIRE(s.assignment.size() == 100);
  std::set<std::size_t> used(s.assignment.begin(), s.assignment.end());
  CHECK(used == std::set<std::size_t>{0, 1});
  for (const auto& c : s.centers)
    for (double x : c) CHECK((x >= 0.0 && x <= 10000.0));
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& c = s.centers[s.assignment[i]];
    const double d = std::hypot(s.points.point(i)[0] - c[0], s.points.point(i)[1] - c[1]);
    CHECK(d < 10.0);  // unit noise
  }
  CHECK(generate_clustered(2, 101, 3).centers.size() == 3);
  CHECK(generate_pointset(Generator::clustered, 2, 100, 3) == s.points);
}

TEST_CASE("exact distance: values and counting") {
  DistanceOracle o(make(2, {0, 0, 3, 4, 1, 1}));
  CHECK(o.exact(0, 0) == 0.0);
  CHECK(o.exact_query_count() == 0);
  CHECK(o.exact(0, 1) == 5.0);
  CHECK(o.exact_query_count() == 1);
  CHECK(o.exact(1, 0) == o.exact(0, 1));
  CHECK(o.exact_query_count() == 3);
  CHECK_THROWS_AS(o.exact(0, 3), IndexOutOfRange);
  CHECK(o.ledger().exact_total() == 3);
}

TEST_CASE("query point distance") {
  DistanceOracle o(make(2, {1, 2, 5, 5}));
  const std::vector<double> q{1, 1};
  CHECK(o.query_point(q, 0) == 1.0);
  CHECK(o.query_point(std::vector<double>{1, 2}, 0) == 0.0);
  CHECK(o.query_point_count() == 2);
  CHECK(o.exact_query_count() == 0);
  CHECK_THROWS_AS(o.query_point(std::vector<double>{1, 1, 1}, 0), InvalidArgument);
}

TEST_CASE("approximate distances stay in [d, 2d] and are frozen") {
  auto p = std::make_shared<const PointSet>(generate_pointset(Generator::normal, 3, 60, 4));
  DistanceOracle o(p, 99);
  const auto truth = oracle::distance_matrix(*p);
  for (std::size_t i = 0; i < 60; ++i) {
    CHECK(o.approx(i, i) == 0.0);
    for (std::size_t j = 0; j < 60; ++j) {
      if (i == j) continue;
      const double a = o.approx(i, j);
      CHECK(a >= truth[i][j]);
      CHECK(a <= 2.0 * truth[i][j]);
      CHECK(a == o.approx(j, i));
    }
  }
  CHECK(o.exact_query_count() == 0);

  DistanceOracle five(make(2, {0, 0, 3, 4}), 1);
  const double a = five.approx(0, 1);
  CHECK((a >= 5.0 && a <= 10.0));
  CHECK(five.approx(0, 1) == a);
  CHECK(DistanceOracle(make(2, {0, 0, 3, 4}), 1).approx(1, 0) == a);
}

TEST_CASE("metric axioms on random triples") {
  const PointSet p = generate_pointset(Generator::exp, 4, 200, 8);
  DistanceOracle o(std::make_shared<const PointSet>(p));
  Rng rng(5);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t i = rng.below(200), j = rng.below(200), k = rng.below(200);
    const double ij = o.ground_truth(i, j), jk = o.ground_truth(j, k), ik = o.ground_truth(i, k);
    CHECK(ij == o.ground_truth(j, i));
    CHECK(ik <= ij + jk + 1e-9 * std::max({1.0, ij, jk}));
  }
}

TEST_CASE("point set text round trip is lossless") {
  const PointSet p = generate_pointset(Generator::normal, 3, 25, 13);
  std::stringstream s;
  write_pointset(s, p);
  std::string first;
  std::getline(s, first);
  CHECK(first == "3 25");
  s.seekg(0);
  const PointSet q = read_pointset(s);
  CHECK(std::equal(p.coords().begin(), p.coords().end(), q.coords().begin(), q.coords().end()));

  std::istringstream bad("2 3\n1 2\n3\n");
  CHECK_THROWS_AS(read_pointset(bad), IoError);
}
