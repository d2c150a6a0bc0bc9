#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmetric/metric.hpp"

namespace fmetric {

enum class Task { spanner, ann, wspd };
std::string_view to_string(Task task);
Task parse_task(std::string_view name);

/// Query points for ANN runs: uniform on [-10, 10]^d, or normal with scale 100.
enum class QueryDist { uniform, normal };
std::string_view to_string(QueryDist dist);
QueryDist parse_query_dist(std::string_view name);

std::vector<double> generate_query(QueryDist dist, std::size_t dim, std::uint64_t seed);

inline constexpr std::size_t kDefaultMaxN = 1000;
inline constexpr std::size_t kDefaultAnnMaxN = 30000;

struct ExperimentSpec {
  Task task = Task::spanner;
  Generator generator = Generator::uniform;
  std::vector<std::size_t> dims{2};
  std::vector<std::size_t> ns;
  std::vector<double> eps;
  /// Spanner task: strategy names plus wspd_quadtree / wspd_covertree.
  /// ANN task: ann, ann_prefilter. WSPD task: quadtree, covertree.
  /// Empty means the task's default.
  std::vector<std::string> strategies;
  /// Instance seeds. When empty, `instances` seeds are derived from master_seed.
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 1;
  std::size_t instances = 0;  // 0: 10 for ann, 5 otherwise
  std::size_t perms = 10;     // ann only
  QueryDist query_dist = QueryDist::uniform;
  std::size_t max_n = 0;      // 0: task default
  /// Output stem: writes <out>.raw.csv and <out>.agg.csv (and <out>.runs.txt for ann).
  std::string out;
  std::string dump_bounds_dir;  // final bound matrices of blind runs
  std::string dump_dir;         // spanners (spanner task) or decompositions (wspd task)
  bool timing = false;          // measure runtime_ms; off keeps output byte-stable
  unsigned jobs = 1;
};

/// Throws SpecError describing the first problem found.
void validate(const ExperimentSpec& spec);

/// Strategies, seeds and size cap with defaults applied.
std::vector<std::string> resolved_strategies(const ExperimentSpec& spec);
std::vector<std::uint64_t> resolved_seeds(const ExperimentSpec& spec);
std::size_t resolved_max_n(const ExperimentSpec& spec);

struct RawRow {
  Task task;
  Generator generator;
  std::size_t dim;
  std::size_t n;
  double eps;
  std::string strategy;
  std::uint64_t seed;
  std::size_t perm;
  std::uint64_t edges;
  std::uint64_t queries;
  double runtime_ms;
};

struct AggregateRow {
  Task task;
  Generator generator;
  std::size_t dim;
  std::size_t n;
  double eps;
  std::string strategy;
  double mean_edges;
  double std_edges;
  double mean_queries;
  double std_queries;
  double mean_runtime_ms;
  double std_runtime_ms;
  std::size_t runs;
};

/// One ANN run: `n dim eps seed queries candidate distance`, seed being the
/// permutation seed.
struct AnnRunRecord {
  std::size_t n;
  std::size_t dim;
  double eps;
  std::uint64_t seed;
  std::uint64_t queries;
  std::size_t candidate;
  double distance;
};

struct ExperimentResult {
  std::vector<RawRow> raw;
  std::vector<AggregateRow> aggregate;
  std::vector<AnnRunRecord> ann_runs;
  std::string raw_path;
  std::string aggregate_path;
  std::string runs_path;
};

/// Runs every (dim, n, eps, strategy, seed) cell, in parallel when
/// spec.jobs > 1, and merges rows in that coordinate order so the output
/// does not depend on scheduling. Writes the CSVs when spec.out is set.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Group raw rows by (task, generator, dim, n, eps, strategy) in first-seen
/// order; std is the sample standard deviation (0 for a single run).
std::vector<AggregateRow> aggregate(const std::vector<RawRow>& raw);

void write_raw_csv(std::ostream& out, const std::vector<RawRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
void write_ann_runs(std::ostream& out, const std::vector<AnnRunRecord>& runs);
std::vector<RawRow> read_raw_csv(std::istream& in);
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// Least-squares slope of log(y) against log(x).
double fit_exponent(const std::vector<std::pair<double, double>>& points);

/// Parse `a,b,c`, a range `lo:hi[:step]`, or a mix of both.
std::vector<std::size_t> parse_size_list(std::string_view text);
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// Comma-separated reals; each may be a fraction such as 1/32.
std::vector<double> parse_real_list(std::string_view text);
std::vector<std::string> parse_name_list(std::string_view text);

}  // namespace fmetric
