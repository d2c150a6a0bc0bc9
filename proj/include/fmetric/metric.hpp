#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fmetric {

enum class Generator { uniform, normal, clustered, exp };

std::string_view to_string(Generator g);
Generator parse_generator(std::string_view name);

/// A finite list of points in R^dim, stored row-major.
class PointSet {
 public:
  PointSet(std::size_t dim, std::vector<double> coords, std::string label = "custom",
           std::uint64_t seed = 0);

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const;
  std::span<const double> coords() const noexcept { return coords_; }
  const std::string& label() const noexcept { return label_; }
  std::uint64_t seed() const noexcept { return seed_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::string label_;
  std::uint64_t seed_;
};

/// Euclidean distance. Every ground-truth distance in the library goes
/// through this one function so that equal inputs give bit-equal outputs.
double euclidean(std::span<const double> p, std::span<const double> q);

struct ClusteredSample {
  PointSet points;
  std::vector<std::vector<double>> centers;
  std::vector<std::size_t> assignment;  // point index -> center index
};

inline constexpr std::size_t kPointsPerCluster = 50;

/// uniform: unit cube. normal: i.i.d. N(0,1). clustered: ceil(n/50) centers in
/// [0,10000]^dim, unit normal noise. exp: coordinates 2^xi, xi ~ U[1,25].
PointSet generate_pointset(Generator kind, std::size_t dim, std::size_t n, std::uint64_t seed);
ClusteredSample generate_clustered(std::size_t dim, std::size_t n, std::uint64_t seed);

/// Plain text: `dim n`, then n lines of dim coordinates at 17 significant digits.
void write_pointset(std::ostream& out, const PointSet& points);
PointSet read_pointset(std::istream& in, std::string label = "file");

/// Exact-query counts per algorithm phase.
struct QueryLedger {
  std::map<std::string, std::uint64_t, std::less<>> exact_by_phase;
  std::map<std::string, std::uint64_t, std::less<>> query_point_by_phase;

  std::uint64_t exact_total() const;
  std::uint64_t query_point_total() const;
};

/// Gatekeeper for the expensive metric. Exact distances are counted; the
/// simulated 2-approximation A with d <= A <= 2d is free.
///
/// Not thread-safe; use one oracle per thread.
class DistanceOracle {
 public:
  using Metric = std::function<double(std::span<const double>, std::span<const double>)>;

  explicit DistanceOracle(std::shared_ptr<const PointSet> points, std::uint64_t approx_seed = 0,
                          Metric metric = euclidean);

  std::size_t size() const noexcept { return points_->size(); }
  const PointSet& points() const noexcept { return *points_; }
  const std::shared_ptr<const PointSet>& shared_points() const noexcept { return points_; }
  std::uint64_t approx_seed() const noexcept { return approx_seed_; }

  /// Counted unless i == j.
  double exact(std::size_t i, std::size_t j);
  /// Always counted, against the query-point counter.
  double query_point(std::span<const double> q, std::size_t i);
  /// Frozen A[i][j] = u_ij * d(i,j), u_ij ~ U[1,2]. Materializes the table on first use.
  double approx(std::size_t i, std::size_t j);
  /// Approximate distances from an external point q to every point, with
  /// factors frozen per (approx_seed, q). Free.
  std::vector<double> approx_to_query(std::span<const double> q) const;
  bool has_approx_table() const noexcept { return !approx_.empty() || size() < 2; }

  /// Uncounted access for verification code.
  double ground_truth(std::size_t i, std::size_t j) const;
  double ground_truth(std::span<const double> q, std::size_t i) const;

  std::uint64_t exact_query_count() const noexcept { return exact_count_; }
  std::uint64_t query_point_count() const noexcept { return query_point_count_; }
  const QueryLedger& ledger() const noexcept { return ledger_; }

  /// Subsequent queries are booked under `phase`.
  void set_phase(std::string phase) { phase_ = std::move(phase); }
  const std::string& phase() const noexcept { return phase_; }

 private:
  void check_index(std::size_t i) const;
  void materialize_approx();

  std::shared_ptr<const PointSet> points_;
  std::uint64_t approx_seed_;
  Metric metric_;
  std::vector<double> approx_;  // strict upper triangle, row-major
  std::uint64_t exact_count_ = 0;
  std::uint64_t query_point_count_ = 0;
  QueryLedger ledger_;
  std::string phase_ = "default";
};

/// Offset of (i, j), i < j, in a row-major strict upper triangle of an n x n matrix.
constexpr std::size_t triangle_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

}  // namespace fmetric
