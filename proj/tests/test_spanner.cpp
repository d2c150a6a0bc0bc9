#include <doctest.h>

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

#include "fmetric/bounds.hpp"
#include "fmetric/error.hpp"
#include "fmetric/metric.hpp"
#include "fmetric/rng.hpp"
#include "fmetric/spanner.hpp"
#include "oracles.hpp"

using namespace fmetric;

namespace {

std::shared_ptr<const PointSet> make(std::size_t dim, std::vector<double> coords) {
  return std::make_shared<const PointSet>(dim, std::move(coords));
}

std::vector<oracle::WEdge> as_edges(const Spanner& s) {
  std::vector<oracle::WEdge> out;
  for (const auto& e : s.edges) out.push_back({e.i, e.j, e.weight});
  return out;
}

const std::vector<std::string> kBlind = {
    "blind_random",        "blind_random_cf",     "blind_random_lbf", "blind_random_cf_lbf",
    "blind_greedy",        "quasi_sorted_greedy", "quasi_sorted_shaker"};

}  // namespace

TEST_CASE("strategy names round trip") {
  for (const auto& name : strategy_names()) CHECK(Strategy::parse(name).name() == name);
  CHECK(strategy_names().size() == 8);
  CHECK_THROWS_AS(Strategy::parse("blind_bogus"), InvalidArgument);
  CHECK(Strategy::parse("blind_random_cf_lbf").connect_first);
  CHECK(Strategy::parse("blind_random_cf_lbf").lower_bound_first);
  CHECK_FALSE(Strategy::parse("greedy").is_blind());
}

TEST_CASE("two points give one edge under every strategy") {
  for (const auto& name : strategy_names()) {
    DistanceOracle o(make(2, {0, 0, 1, 1}), 3);
    const Spanner s = build_spanner(o, 0.5, Strategy::parse(name), 1);
    REQUIRE(s.edges.size() == 1);
    CHECK(s.queries_used == 1);
    CHECK(s.edges[0].weight == o.ground_truth(0, 1));
  }
}

TEST_CASE("one point gives no edges") {
  DistanceOracle o(make(2, {0, 0}));
  CHECK(build_spanner(o, 0.5, Strategy::parse("blind_greedy"), 1).edges.empty());
  CHECK(build_greedy_spanner(o, 0.5).edges.empty());
}

TEST_CASE("eps must be positive") {
  DistanceOracle o(make(1, {0, 1, 2}));
  CHECK_THROWS_AS(build_spanner(o, 0.0, Strategy::parse("blind_greedy"), 1), InvalidArgument);
  CHECK_THROWS_AS(build_greedy_spanner(o, -1.0), InvalidArgument);
}

// Hand simulation: every pair starts at ratio infinity. After two reveals the
// third pair has a = |d1 - d2| (about 0.03 or 0) and b = d1 + d2 (about 2),
// far above 1 + 10, so all three distances get queried.
TEST_CASE("near-equilateral triangle with eps = 10 needs all three edges") {
  for (const auto& name : kBlind)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      DistanceOracle o(make(2, {0, 0, 1, 0, 0.5, 0.9}), seed);
      const Spanner s = build_spanner(o, 10.0, Strategy::parse(name), seed);
      CHECK(s.edges.size() == 3);
      CHECK(s.queries_used == 3);
    }
}

TEST_CASE("greedy on collinear points keeps the two short edges") {
  DistanceOracle o(make(1, {0, 1, 2}));
  const Spanner s = build_greedy_spanner(o, 0.1);
  CHECK(s.queries_used == 3);
  REQUIRE(s.edges.size() == 2);
  std::vector<std::pair<std::size_t, std::size_t>> got;
  for (const auto& e : s.edges) got.emplace_back(std::min(e.i, e.j), std::max(e.i, e.j));
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  CHECK(verify_stretch(s, o.points()) == 1.0);
}

TEST_CASE("greedy queries every pair once") {
  for (std::size_t n : {2u, 7u, 40u}) {
    auto p = std::make_shared<const PointSet>(generate_pointset(Generator::normal, 3, n, n));
    DistanceOracle o(p);
    const Spanner s = build_greedy_spanner(o, 0.2);
    CHECK(s.queries_used == n * (n - 1) / 2);
    CHECK(o.exact_query_count() == n * (n - 1) / 2);
  }
}

TEST_CASE("verify_stretch against brute force") {
  auto p = make(2, {0, 0, 3, 1, -1, 2, 0.5, -2.5});
  const auto truth = oracle::distance_matrix(*p);

  Spanner complete;
  complete.n = 4;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) complete.edges.push_back({i, j, truth[i][j]});
  CHECK(verify_stretch(complete, *p) == 1.0);

  Spanner star;
  star.n = 4;
  for (std::size_t j = 1; j < 4; ++j) star.edges.push_back({0, j, truth[0][j]});
  const double expected = oracle::stretch(truth, oracle::floyd_warshall(4, as_edges(star)));
  CHECK(verify_stretch(star, *p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected > 1.0);

  Spanner broken;
  broken.n = 4;
  broken.edges.push_back({0, 1, truth[0][1]});
  CHECK(verify_stretch(broken, *p) == kInfinity);

  Spanner path;
  path.n = 3;
  path.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  CHECK(verify_stretch(path, *make(1, {0, 1, 2})) == 1.0);
}

TEST_CASE("blind spanners: stretch, accounting, weights, determinism") {
  for (const auto& name : strategy_names())
    for (Generator g : {Generator::uniform, Generator::clustered, Generator::exp}) {
      auto p = std::make_shared<const PointSet>(generate_pointset(g, 3, 30, 8));
      const auto truth = oracle::distance_matrix(*p);
      DistanceOracle o(p, 5);
      const Strategy st = Strategy::parse(name);
      const Spanner s = build_spanner(o, 0.3, st, 12);
      CHECK(s.strategy == name);
      const double stretch = oracle::stretch(truth, oracle::floyd_warshall(30, as_edges(s)));
      CHECK(stretch <= 1.3 * (1 + 1e-9));
      CHECK(verify_stretch(s, *p) == doctest::Approx(stretch).epsilon(1e-12));
      for (const auto& e : s.edges) CHECK(e.weight == truth[e.i][e.j]);
      if (st.is_blind()) {
        CHECK(s.edges.size() == s.queries_used);
        CHECK(o.exact_query_count() == s.queries_used);
      }
      DistanceOracle again(p, 5);
      CHECK(build_spanner(again, 0.3, st, 12) == s);
    }
}

TEST_CASE("final bounds satisfy the ratio test everywhere") {
  auto p = std::make_shared<const PointSet>(generate_pointset(Generator::uniform, 2, 40, 1));
  DistanceOracle o(p);
  BoundMatrix bounds(1);
  build_spanner(o, 0.25, Strategy::parse("blind_random_lbf"), 3, &bounds);
  REQUIRE(bounds.size() == 40);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = i + 1; j < 40; ++j) CHECK(bounds.ratio(i, j) <= 1.25);
}

TEST_CASE("single violating pair is chosen by every strategy") {
  auto p = make(1, {0, 1, 2});
  for (const auto& name : kBlind) {
    DistanceOracle o(p, 1);
    BoundMatrix m(3);
    m.reveal(0, 1, 1.0);
    m.reveal(1, 2, 1.0);
    PairSelector sel(Strategy::parse(name), o);
    Rng rng(2);
    const auto pick = sel.next(m, 0.1, rng);
    REQUIRE(pick.has_value());
    CHECK(std::min(pick->first, pick->second) == 0);
    CHECK(std::max(pick->first, pick->second) == 2);
    m.reveal(0, 2, 2.0);
    CHECK_FALSE(sel.next(m, 0.1, rng).has_value());
  }
}

TEST_CASE("blind_greedy on a fresh matrix picks uniformly") {
  auto p = std::make_shared<const PointSet>(generate_pointset(Generator::uniform, 2, 4, 3));
  DistanceOracle o(p);
  const BoundMatrix m(4);
  PairSelector sel(Strategy::parse("blind_greedy"), o);
  Rng rng(8);
  std::map<std::pair<std::size_t, std::size_t>, int> hits;
  for (int t = 0; t < 6000; ++t) ++hits[*sel.next(m, 0.1, rng)];
  CHECK(hits.size() == 6);
  for (const auto& [pair, count] : hits) CHECK((count > 850 && count < 1150));
}

// Independent trace: order pairs by A, then alternately take the smallest and
// the largest unrevealed pair until no pair violates the ratio test.
TEST_CASE("shaker alternates between the cheap and the expensive end") {
  auto p = make(2, {0, 0, 1, 0, 0, 2, 3, 3});
  for (std::uint64_t approx_seed = 0; approx_seed < 6; ++approx_seed) {
    DistanceOracle o(p, approx_seed);
    std::vector<std::tuple<double, std::size_t, std::size_t>> order;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) order.emplace_back(o.approx(i, j), i, j);
    std::sort(order.begin(), order.end());

    const double eps = 0.05;
    std::vector<std::pair<std::size_t, std::size_t>> expected;
    {
      BoundMatrix m(4);
      std::size_t lo = 0, hi = order.size();
      for (int step = 1;; ++step) {
        bool violating = false;
        for (std::size_t i = 0; i < 4; ++i)
          for (std::size_t j = i + 1; j < 4; ++j)
            violating = violating || m.ratio(i, j) > 1 + eps;
        if (!violating) break;
        while (lo < hi && m.known(std::get<1>(order[lo]), std::get<2>(order[lo]))) ++lo;
        while (hi > lo && m.known(std::get<1>(order[hi - 1]), std::get<2>(order[hi - 1]))) --hi;
        const auto& [a, i, j] = step % 2 == 1 ? order[lo++] : order[--hi];
        expected.emplace_back(i, j);
        m.reveal(i, j, o.ground_truth(i, j));
      }
    }
    const Spanner s = build_spanner(o, eps, Strategy::parse("quasi_sorted_shaker"), 0);
    std::vector<std::pair<std::size_t, std::size_t>> got;
    for (const auto& e : s.edges) got.emplace_back(e.i, e.j);
    CHECK(got == expected);
    REQUIRE(expected.size() >= 2);
    CHECK(expected[0] == std::pair{std::get<1>(order.front()), std::get<2>(order.front())});
    CHECK(expected[1] == std::pair{std::get<1>(order.back()), std::get<2>(order.back())});
  }
}

TEST_CASE("blind greedy on 400 uniform points lies between a tree and the complete graph") {
  auto p = std::make_shared<const PointSet>(generate_pointset(Generator::uniform, 2, 400, 1));
  DistanceOracle o(p);
  const Spanner s = build_spanner(o, 0.1, Strategy::parse("blind_greedy"), 1);
  CHECK(s.edges.size() > 399);
  CHECK(s.edges.size() < 79800);
}

TEST_CASE("spanner text round trip") {
  auto p = std::make_shared<const PointSet>(generate_pointset(Generator::normal, 2, 12, 6));
  DistanceOracle o(p);
  const Spanner s = build_spanner(o, 0.5, Strategy::parse("blind_random_cf"), 9);
  std::stringstream text;
  write_spanner(text, s);
  std::string first;
  std::getline(text, first);
  CHECK(first == "12 0.5 blind_random_cf 9 " + std::to_string(s.queries_used));
  text.seekg(0);
  CHECK(read_spanner(text) == s);
}
