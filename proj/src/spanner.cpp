#include "fmetric/spanner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <tuple>

#include "fmetric/error.hpp"
#include "fmetric/graph.hpp"

namespace fmetric {

std::string Strategy::name() const {
  switch (kind) {
    case StrategyKind::blind_random: {
      std::string s = "blind_random";
      if (connect_first) s += "_cf";
      if (lower_bound_first) s += "_lbf";
      return s;
    }
    case StrategyKind::blind_greedy: return "blind_greedy";
    case StrategyKind::quasi_sorted_greedy: return "quasi_sorted_greedy";
    case StrategyKind::quasi_sorted_shaker: return "quasi_sorted_shaker";
    case StrategyKind::greedy_baseline: return "greedy";
  }
  return "?";
}

Strategy Strategy::parse(std::string_view name) {
  if (name == "blind_random") return {StrategyKind::blind_random, false, false};
  if (name == "blind_random_cf") return {StrategyKind::blind_random, true, false};
  if (name == "blind_random_lbf") return {StrategyKind::blind_random, false, true};
  if (name == "blind_random_cf_lbf") return {StrategyKind::blind_random, true, true};
  if (name == "blind_greedy") return {StrategyKind::blind_greedy};
  if (name == "quasi_sorted_greedy") return {StrategyKind::quasi_sorted_greedy};
  if (name == "quasi_sorted_shaker") return {StrategyKind::quasi_sorted_shaker};
  if (name == "greedy") return {StrategyKind::greedy_baseline};
  throw InvalidArgument("unknown spanner strategy '" + std::string(name) + "'");
}

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names = {
      "blind_random",        "blind_random_cf",     "blind_random_lbf",
      "blind_random_cf_lbf", "blind_greedy",        "quasi_sorted_greedy",
      "quasi_sorted_shaker", "greedy"};
  return names;
}

// ---------------------------------------------------------------------------
// Pair selection

PairSelector::PairSelector(const Strategy& strategy, DistanceOracle& oracle)
    : strategy_(strategy) {
  if (strategy_.kind == StrategyKind::greedy_baseline)
    throw InvalidArgument("the greedy baseline does not select pairs blindly");
  if (!strategy_.needs_approx()) return;

  const std::size_t n = oracle.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> keyed;
  keyed.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) keyed.emplace_back(oracle.approx(i, j), i, j);
  std::sort(keyed.begin(), keyed.end());
  by_approx_.reserve(keyed.size());
  for (const auto& [a, i, j] : keyed) by_approx_.emplace_back(i, j);
  back_ = by_approx_.size();
}

std::optional<Pair> PairSelector::next(const BoundMatrix& bounds, double eps, Rng& rng) {
  ++calls_;
  switch (strategy_.kind) {
    case StrategyKind::blind_greedy: return next_blind_greedy(bounds, eps, rng);
    case StrategyKind::blind_random: return next_blind_random(bounds, eps, rng);
    case StrategyKind::quasi_sorted_greedy: return next_quasi_sorted(bounds, eps, true);
    case StrategyKind::quasi_sorted_shaker:
      return next_quasi_sorted(bounds, eps, calls_ % 2 == 1);
    case StrategyKind::greedy_baseline: break;
  }
  return std::nullopt;
}

// Pools: 0 = all violating pairs (blind_greedy: those at the best ratio),
// 1 = violating with b = infinity, 2 = violating with a = 0.
bool PairSelector::in_pool(int pool, double a, double b, double eps, double best) const {
  if (!BoundMatrix::violates(a, b, eps)) return false;
  switch (pool) {
    case 0:
      return strategy_.kind != StrategyKind::blind_greedy || BoundMatrix::ratio(a, b) == best;
    case 1: return b == kInfinity;
    default: return a == 0.0;
  }
}

void PairSelector::summarize(const BoundMatrix& bounds, double eps, std::size_t k,
                             RowSummary& row) const {
  const auto a = bounds.lower_tail(k);
  const auto b = bounds.upper_tail(k);
  row = RowSummary{bounds.row_stamp(k), true};
  if (strategy_.kind == StrategyKind::blind_greedy) {
    for (std::size_t t = 0; t < a.size(); ++t) {
      if (!BoundMatrix::violates(a[t], b[t], eps)) continue;
      const double r = BoundMatrix::ratio(a[t], b[t]);
      if (r < row.best_ratio) continue;
      if (r > row.best_ratio) {
        row.best_ratio = r;
        row.count[0] = 0;
      }
      ++row.count[0];
    }
    return;
  }
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (!BoundMatrix::violates(a[t], b[t], eps)) continue;
    ++row.count[0];
    if (b[t] == kInfinity) ++row.count[1];
    if (a[t] == 0.0) ++row.count[2];
  }
}

void PairSelector::refresh(const BoundMatrix& bounds, double eps) {
  const std::size_t n = bounds.size();
  if (cached_for_ != &bounds || cached_eps_ != eps || rows_.size() != n) {
    rows_.assign(n, RowSummary{});
    cached_for_ = &bounds;
    cached_eps_ = eps;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (!rows_[k].valid || rows_[k].stamp != bounds.row_stamp(k))
      summarize(bounds, eps, k, rows_[k]);
}

// The pick-th member of a pool in row-major order.
Pair PairSelector::locate(const BoundMatrix& bounds, double eps, int pool, double best,
                          std::uint64_t pick) const {
  std::size_t k = 0;
  for (;; ++k) {
    const RowSummary& row = rows_[k];
    const std::size_t c =
        pool == 0 && strategy_.kind == StrategyKind::blind_greedy
            ? (row.best_ratio == best ? row.count[0] : 0)
            : row.count[pool];
    if (pick < c) break;
    pick -= c;
  }
  const auto a = bounds.lower_tail(k);
  const auto b = bounds.upper_tail(k);
  for (std::size_t t = 0;; ++t) {
    if (!in_pool(pool, a[t], b[t], eps, best)) continue;
    if (pick-- == 0) return Pair{k, k + 1 + t};
  }
}

std::optional<Pair> PairSelector::next_blind_greedy(const BoundMatrix& bounds, double eps,
                                                    Rng& rng) {
  refresh(bounds, eps);
  double best = 0.0;
  std::uint64_t ties = 0;
  for (const auto& row : rows_) {
    if (row.count[0] == 0 || row.best_ratio < best) continue;
    if (row.best_ratio > best) {
      best = row.best_ratio;
      ties = 0;
    }
    ties += row.count[0];
  }
  if (ties == 0) return std::nullopt;
  return locate(bounds, eps, 0, best, rng.below(ties));
}

std::optional<Pair> PairSelector::next_blind_random(const BoundMatrix& bounds, double eps,
                                                    Rng& rng) {
  refresh(bounds, eps);
  std::uint64_t total[3] = {0, 0, 0};
  for (const auto& row : rows_)
    for (int p = 0; p < 3; ++p) total[p] += row.count[p];
  int pool = 0;
  if (strategy_.connect_first && total[1] > 0)
    pool = 1;
  else if (strategy_.lower_bound_first && total[2] > 0)
    pool = 2;
  if (total[pool] == 0) return std::nullopt;
  return locate(bounds, eps, pool, 0.0, rng.below(total[pool]));
}

// The traversal queries pairs in A order whether or not they currently
// violate; only pairs already revealed are passed over. It ends as soon as no
// pair violates. Unrevealed pairs always lie in [front_, back_).
std::optional<Pair> PairSelector::next_quasi_sorted(const BoundMatrix& bounds, double eps,
                                                    bool ascending) {
  refresh(bounds, eps);
  bool any = false;
  for (const auto& row : rows_) any = any || row.count[0] > 0;
  if (!any) return std::nullopt;

  const auto revealed = [&](std::size_t pos) {
    return bounds.known(by_approx_[pos].first, by_approx_[pos].second);
  };
  while (front_ < back_ && revealed(front_)) ++front_;
  while (back_ > front_ && revealed(back_ - 1)) --back_;
  if (front_ == back_) return std::nullopt;
  return ascending ? by_approx_[front_++] : by_approx_[--back_];
}

// ---------------------------------------------------------------------------
// Construction

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw InvalidArgument("spanner eps must be a positive finite number");
}

class PhaseGuard {
 public:
  PhaseGuard(DistanceOracle& oracle, std::string phase)
      : oracle_(oracle), saved_(oracle.phase()) {
    oracle_.set_phase(std::move(phase));
  }
  ~PhaseGuard() { oracle_.set_phase(saved_); }
  PhaseGuard(const PhaseGuard&) = delete;
  PhaseGuard& operator=(const PhaseGuard&) = delete;

 private:
  DistanceOracle& oracle_;
  std::string saved_;
};

}  // namespace

Spanner build_blind_spanner(DistanceOracle& oracle, double eps, const Strategy& strategy,
                            std::uint64_t seed, BoundMatrix* final_bounds) {
  check_eps(eps);
  const std::size_t n = oracle.size();
  PhaseGuard phase(oracle, "blind");

  BoundMatrix bounds(n);
  PairSelector selector(strategy, oracle);
  Rng rng(derive_seed(seed, "pair-selection"));
  Spanner result{n, {}, eps, 0, strategy.name(), seed};
  const std::uint64_t before = oracle.exact_query_count();

  while (const auto pair = selector.next(bounds, eps, rng)) {
    const auto [i, j] = *pair;
    const double v = oracle.exact(i, j);
    result.edges.push_back({i, j, v});
    bounds.reveal(i, j, v);
  }

  result.queries_used = oracle.exact_query_count() - before;
  if (final_bounds) *final_bounds = std::move(bounds);
  return result;
}

Spanner build_greedy_spanner(DistanceOracle& oracle, double eps) {
  check_eps(eps);
  const std::size_t n = oracle.size();
  PhaseGuard phase(oracle, "all-pairs");
  const std::uint64_t before = oracle.exact_query_count();

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(oracle.exact(i, j), i, j);
  std::sort(pairs.begin(), pairs.end());

  Spanner result{n, {}, eps, 0, Strategy{StrategyKind::greedy_baseline}.name(), 0};
  Graph graph(n);
  // Graph distances only shrink as edges are added, so a distance found by an
  // earlier search is an upper bound that may decide a pair for free. When it
  // does not, a full search from i refreshes every bound in i's row.
  std::vector<double> known(pairs.size(), kInfinity);
  const auto slot = [&](std::size_t u, std::size_t w) -> double& {
    return known[triangle_index(n, std::min(u, w), std::max(u, w))];
  };
  for (const auto& [d, i, j] : pairs) {
    const double limit = (1.0 + eps) * d;
    if (slot(i, j) <= limit) continue;
    const std::vector<double> dist = shortest_paths(graph, i);
    for (std::size_t u = 0; u < n; ++u)
      if (u != i) slot(i, u) = std::min(slot(i, u), dist[u]);
    if (dist[j] > limit) {
      graph.add_edge(i, j, d);
      result.edges.push_back({i, j, d});
      slot(i, j) = d;
    }
  }
  result.queries_used = oracle.exact_query_count() - before;
  return result;
}

Spanner build_spanner(DistanceOracle& oracle, double eps, const Strategy& strategy,
                      std::uint64_t seed, BoundMatrix* final_bounds) {
  if (strategy.kind == StrategyKind::greedy_baseline) {
    Spanner s = build_greedy_spanner(oracle, eps);
    s.seed = seed;
    return s;
  }
  return build_blind_spanner(oracle, eps, strategy, seed, final_bounds);
}

double verify_stretch(const Spanner& spanner, const PointSet& points) {
  const std::size_t n = points.size();
  if (spanner.n != n) throw InvalidArgument("spanner and point set sizes differ");
  Graph graph(n);
  for (const auto& e : spanner.edges) {
    if (e.i >= n || e.j >= n) throw IndexOutOfRange("spanner edge endpoint out of range");
    graph.add_edge(e.i, e.j, e.weight);
  }

  double worst = 1.0;
  for (std::size_t u = 0; u < n; ++u) {
    const auto dist = shortest_paths(graph, u);
    for (std::size_t v = u + 1; v < n; ++v) {
      const double truth = euclidean(points.point(u), points.point(v));
      double stretch;
      if (dist[v] == kInfinity)
        stretch = kInfinity;
      else if (truth == 0.0)
        stretch = dist[v] == 0.0 ? 1.0 : kInfinity;
      else
        stretch = dist[v] / truth;
      worst = std::max(worst, stretch);
    }
  }
  return worst;
}

void write_spanner(std::ostream& out, const Spanner& spanner) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g", spanner.eps);
  out << spanner.n << ' ' << buf << ' ' << spanner.strategy << ' ' << spanner.seed << ' '
      << spanner.queries_used << '\n';
  for (const auto& e : spanner.edges) {
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", e.i, e.j, e.weight);
    out << buf;
  }
  if (!out) throw IoError("failed to write spanner");
}

Spanner read_spanner(std::istream& in) {
  Spanner s;
  if (!(in >> s.n >> s.eps >> s.strategy >> s.seed >> s.queries_used))
    throw IoError("spanner header must be `n eps strategy seed queries`");
  Edge e{};
  while (in >> e.i >> e.j >> e.weight) {
    if (e.i >= s.n || e.j >= s.n) throw IoError("spanner edge endpoint out of range");
    s.edges.push_back(e);
  }
  if (!in.eof()) throw IoError("malformed spanner edge line");
  return s;
}

}  // namespace fmetric
