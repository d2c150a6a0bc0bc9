#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmetric/bounds.hpp"
#include "fmetric/metric.hpp"
#include "fmetric/rng.hpp"

namespace fmetric {

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Spanner {
  std::size_t n = 0;
  std::vector<Edge> edges;
  double eps = 0.0;
  std::uint64_t queries_used = 0;
  std::string strategy;
  std::uint64_t seed = 0;

  friend bool operator==(const Spanner&, const Spanner&) = default;
};

enum class StrategyKind {
  blind_random,
  blind_greedy,
  quasi_sorted_greedy,
  quasi_sorted_shaker,
  greedy_baseline,
};

/// How the next pair is chosen. The two flags only apply to blind_random.
struct Strategy {
  StrategyKind kind = StrategyKind::blind_greedy;
  bool connect_first = false;
  bool lower_bound_first = false;

  /// Canonical names: blind_random, blind_random_cf, blind_random_lbf,
  /// blind_random_cf_lbf, blind_greedy, quasi_sorted_greedy,
  /// quasi_sorted_shaker, greedy.
  std::string name() const;
  static Strategy parse(std::string_view name);
  bool is_blind() const noexcept { return kind != StrategyKind::greedy_baseline; }
  bool needs_approx() const noexcept {
    return kind == StrategyKind::quasi_sorted_greedy || kind == StrategyKind::quasi_sorted_shaker;
  }

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// All strategy names accepted by Strategy::parse.
const std::vector<std::string>& strategy_names();

using Pair = std::pair<std::size_t, std::size_t>;

/// Picks the next pair to query in the blind loop. Stateful: the quasi-sorted
/// strategies walk their A-ordered pair list from both ends (the shaker
/// alternates ends between calls) and the ratio-based strategies cache
/// per-row summaries keyed by the bound matrix's row stamps.
class PairSelector {
 public:
  PairSelector(const Strategy& strategy, DistanceOracle& oracle);

  /// The next pair to query, or nothing once all pairs satisfy the ratio
  /// test. Ratio-based strategies return a violating pair (ratio > 1 + eps);
  /// the quasi-sorted ones return the next unrevealed pair in A order.
  std::optional<Pair> next(const BoundMatrix& bounds, double eps, Rng& rng);

 private:
  std::optional<Pair> next_blind_greedy(const BoundMatrix& bounds, double eps, Rng& rng);
  std::optional<Pair> next_blind_random(const BoundMatrix& bounds, double eps, Rng& rng);
  std::optional<Pair> next_quasi_sorted(const BoundMatrix& bounds, double eps, bool ascending);

  // What a row's tail contributes to the choice, recomputed only when the
  // row's stamp moves.
  struct RowSummary {
    std::uint64_t stamp = 0;
    bool valid = false;
    double best_ratio = 0.0;       // blind_greedy: largest violating ratio
    std::size_t count[3] = {0, 0, 0};  // per pool: ties / violating, b = inf, a = 0
  };

  void refresh(const BoundMatrix& bounds, double eps);
  void summarize(const BoundMatrix& bounds, double eps, std::size_t k, RowSummary& row) const;
  bool in_pool(int pool, double a, double b, double eps, double best) const;
  Pair locate(const BoundMatrix& bounds, double eps, int pool, double best, std::uint64_t pick) const;

  Strategy strategy_;
  std::vector<Pair> by_approx_;  // ascending A, ties by (i, j)
  std::size_t front_ = 0;        // next position for the ascending walk
  std::size_t back_ = 0;         // one past the next position for the descending walk
  std::uint64_t calls_ = 0;
  const BoundMatrix* cached_for_ = nullptr;
  double cached_eps_ = 0.0;
  std::vector<RowSummary> rows_;
};

/// Blind spanner: repeatedly query a violating pair chosen by `strategy` and
/// propagate bounds until every pair has ratio <= 1 + eps. The queried pairs
/// are the edges. If `final_bounds` is given, it receives the last bound matrix.
Spanner build_blind_spanner(DistanceOracle& oracle, double eps, const Strategy& strategy,
                            std::uint64_t seed, BoundMatrix* final_bounds = nullptr);

/// Classical greedy spanner: query all pairs, scan them by increasing
/// distance (ties by index) and keep an edge when the current graph distance
/// exceeds (1 + eps) times it.
Spanner build_greedy_spanner(DistanceOracle& oracle, double eps);

/// Dispatches on strategy.kind.
Spanner build_spanner(DistanceOracle& oracle, double eps, const Strategy& strategy,
                      std::uint64_t seed, BoundMatrix* final_bounds = nullptr);

/// Max over pairs of graph distance / true distance (0/0 counts as 1);
/// infinity when the graph is disconnected. Uses ground truth, no oracle.
double verify_stretch(const Spanner& spanner, const PointSet& points);

/// Text format: `n eps strategy seed queries`, then one `i j weight` line per edge.
void write_spanner(std::ostream& out, const Spanner& spanner);
Spanner read_spanner(std::istream& in);

}  // namespace fmetric
