#include "fmetric/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "fmetric/ann.hpp"
#include "fmetric/bounds.hpp"
#include "fmetric/error.hpp"
#include "fmetric/rng.hpp"
#include "fmetric/spanner.hpp"
#include "fmetric/wspd.hpp"

namespace fmetric {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::spanner: return "spanner";
    case Task::ann: return "ann";
    case Task::wspd: return "wspd";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  if (name == "spanner") return Task::spanner;
  if (name == "ann") return Task::ann;
  if (name == "wspd") return Task::wspd;
  throw SpecError("unknown task '" + std::string(name) + "'");
}

std::string_view to_string(QueryDist dist) {
  return dist == QueryDist::uniform ? "uniform" : "normal";
}

QueryDist parse_query_dist(std::string_view name) {
  if (name == "uniform") return QueryDist::uniform;
  if (name == "normal") return QueryDist::normal;
  throw SpecError("unknown query distribution '" + std::string(name) + "'");
}

std::vector<double> generate_query(QueryDist dist, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> q(dim);
  for (auto& x : q) x = dist == QueryDist::uniform ? rng.uniform(-10.0, 10.0) : 100.0 * rng.normal();
  return q;
}

// ---------------------------------------------------------------------------
// Spec

namespace {

bool is_wspd_strategy(std::string_view s) { return s == "wspd_quadtree" || s == "wspd_covertree"; }

std::string fail_list(std::string_view what) { return std::string(what) + " list is empty"; }

}  // namespace

std::vector<std::string> resolved_strategies(const ExperimentSpec& spec) {
  if (!spec.strategies.empty()) return spec.strategies;
  switch (spec.task) {
    case Task::spanner: return {"greedy", "blind_greedy"};
    case Task::ann: return {"ann"};
    case Task::wspd: return {"quadtree", "covertree"};
  }
  return {};
}

std::vector<std::uint64_t> resolved_seeds(const ExperimentSpec& spec) {
  if (!spec.seeds.empty()) return spec.seeds;
  const std::size_t count = spec.instances ? spec.instances : (spec.task == Task::ann ? 10 : 5);
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t k = 0; k < count; ++k) seeds[k] = derive_seed(spec.master_seed, k);
  return seeds;
}

std::size_t resolved_max_n(const ExperimentSpec& spec) {
  if (spec.max_n) return spec.max_n;
  return spec.task == Task::ann ? kDefaultAnnMaxN : kDefaultMaxN;
}

void validate(const ExperimentSpec& spec) {
  if (spec.dims.empty()) throw SpecError(fail_list("dim"));
  if (spec.ns.empty()) throw SpecError(fail_list("n"));
  if (spec.eps.empty()) throw SpecError(fail_list("eps"));
  for (std::size_t d : spec.dims)
    if (d == 0) throw SpecError("dimension must be at least 1");

  const std::size_t cap = resolved_max_n(spec);
  for (std::size_t n : spec.ns) {
    if (n == 0) throw SpecError("n must be at least 1");
    if (n > cap) {
      char buf[256];
      const double cube = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
      if (spec.task == Task::ann)
        std::snprintf(buf, sizeof buf,
                      "n = %zu exceeds the cap of %zu; each instance holds or recomputes %.3g "
                      "pairwise distances (raise --max-n to proceed)",
                      n, cap, static_cast<double>(n) * static_cast<double>(n));
      else
        std::snprintf(buf, sizeof buf,
                      "n = %zu exceeds the cap of %zu; blind spanners cost on the order of "
                      "n^3 = %.3g bound updates per run (raise --max-n to proceed)",
                      n, cap, cube);
      throw SpecError(buf);
    }
  }

  for (double e : spec.eps) {
    if (!std::isfinite(e)) throw SpecError("eps must be finite");
    if (spec.task == Task::ann && e < 0.0) throw SpecError("ANN eps must be >= 0");
    if (spec.task != Task::ann && e <= 0.0) throw SpecError("spanner eps must be > 0");
  }

  const auto strategies = resolved_strategies(spec);
  if (strategies.empty()) throw SpecError(fail_list("strategy"));
  bool any_wspd = spec.task == Task::wspd;
  for (const auto& s : strategies) {
    switch (spec.task) {
      case Task::spanner:
        if (is_wspd_strategy(s)) {
          any_wspd = true;
          break;
        }
        try {
          Strategy::parse(s);
        } catch (const InvalidArgument&) {
          throw SpecError("unknown spanner strategy '" + s + "'");
        }
        break;
      case Task::ann:
        if (s != "ann" && s != "ann_prefilter") throw SpecError("unknown ANN strategy '" + s + "'");
        break;
      case Task::wspd:
        if (s != "quadtree" && s != "covertree") throw SpecError("unknown WSPD backend '" + s + "'");
        break;
    }
  }
  if (any_wspd)
    for (double e : spec.eps)
      if (e > 1.0) throw SpecError("WSPD spanners need eps in (0, 1]");
  for (const auto& s : strategies)
    if (s == "quadtree" || s == "wspd_quadtree")
      for (std::size_t d : spec.dims)
        if (d > kQuadtreeMaxDim)
          throw SpecError("quadtree decompositions support at most 64 dimensions");

  if (spec.task == Task::ann && spec.perms == 0) throw SpecError("perms must be at least 1");
  if (spec.jobs == 0) throw SpecError("jobs must be at least 1");
  if (!spec.dump_bounds_dir.empty() && spec.task != Task::spanner)
    throw SpecError("--dump-bounds only applies to the spanner task");
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct Cell {
  std::size_t dim;
  std::size_t n;
  double eps;
  std::string strategy;
  std::uint64_t seed;
};

struct CellOutput {
  std::vector<RawRow> rows;
  std::vector<AnnRunRecord> runs;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string cell_name(const ExperimentSpec& spec, const Cell& c) {
  return std::string(to_string(spec.generator)) + "_d" + std::to_string(c.dim) + "_n" +
         std::to_string(c.n) + "_eps" + format_number(c.eps) + "_" + c.strategy + "_s" +
         std::to_string(c.seed);
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::shared_ptr<const PointSet> instance_points(const ExperimentSpec& spec, const Cell& c) {
  return std::make_shared<const PointSet>(
      generate_pointset(spec.generator, c.dim, c.n, derive_seed(c.seed, "points")));
}

CellOutput run_spanner_cell(const ExperimentSpec& spec, const Cell& c) {
  const auto points = instance_points(spec, c);
  DistanceOracle oracle(points, derive_seed(c.seed, "approx"));
  const bool timed = spec.timing;
  const auto start = Clock::now();

  Spanner spanner;
  if (is_wspd_strategy(c.strategy)) {
    const auto backend = parse_wspd_backend(std::string_view(c.strategy).substr(5));
    spanner = build_wspd_spanner(oracle, c.eps, backend);
  } else {
    const Strategy strategy = Strategy::parse(c.strategy);
    const bool keep_bounds = strategy.is_blind() && !spec.dump_bounds_dir.empty();
    std::optional<BoundMatrix> bounds;
    if (keep_bounds) bounds.emplace(std::max<std::size_t>(c.n, 1));
    spanner = build_spanner(oracle, c.eps, strategy, c.seed, keep_bounds ? &*bounds : nullptr);
    if (keep_bounds) {
      auto out = open_output(std::filesystem::path(spec.dump_bounds_dir) /
                             ("bounds_" + cell_name(spec, c) + ".txt"));
      bounds->dump(out);
    }
  }
  const double ms = timed ? elapsed_ms(start) : 0.0;

  if (!spec.dump_dir.empty()) {
    auto out = open_output(std::filesystem::path(spec.dump_dir) /
                           ("spanner_" + cell_name(spec, c) + ".txt"));
    write_spanner(out, spanner);
  }
  return {{RawRow{spec.task, spec.generator, c.dim, c.n, c.eps, c.strategy, c.seed, 0,
                  spanner.edges.size(), spanner.queries_used, ms}},
          {}};
}

CellOutput run_wspd_cell(const ExperimentSpec& spec, const Cell& c) {
  const auto points = instance_points(spec, c);
  DistanceOracle oracle(points, derive_seed(c.seed, "approx"));
  const auto backend = parse_wspd_backend(c.strategy);
  const auto start = Clock::now();
  const Spanner spanner = build_wspd_spanner(oracle, c.eps, backend);
  const double ms = spec.timing ? elapsed_ms(start) : 0.0;

  if (!spec.dump_dir.empty()) {
    DistanceOracle fresh(points, derive_seed(c.seed, "approx"));
    const Wspd wspd = build_wspd(fresh, 16.0 / c.eps, backend);
    auto out = open_output(std::filesystem::path(spec.dump_dir) /
                           ("wspd_" + cell_name(spec, c) + ".txt"));
    write_wspd(out, wspd);
  }
  return {{RawRow{spec.task, spec.generator, c.dim, c.n, c.eps, "wspd_" + c.strategy, c.seed, 0,
                  spanner.edges.size(), spanner.queries_used, ms}},
          {}};
}

CellOutput run_ann_cell(const ExperimentSpec& spec, const Cell& c) {
  const auto points = instance_points(spec, c);
  const auto pairwise = std::make_shared<const PairwiseDistances>(points, 2048);
  AnnInstance instance = make_ann_instance(
      points, generate_query(spec.query_dist, c.dim, derive_seed(c.seed, "query")), c.eps,
      pairwise);
  DistanceOracle oracle(points, derive_seed(c.seed, "approx"));
  if (c.strategy == "ann_prefilter") instance = prefilter_with_approx(instance, oracle);

  CellOutput out;
  const std::uint64_t perm_base = derive_seed(c.seed, "permutation");
  for (std::size_t p = 0; p < spec.perms; ++p) {
    const std::uint64_t perm_seed = derive_seed(perm_base, p);
    const auto start = Clock::now();
    const AnnResult r = ann_search(instance, oracle, perm_seed);
    const double ms = spec.timing ? elapsed_ms(start) : 0.0;
    out.rows.push_back(RawRow{spec.task, spec.generator, c.dim, c.n, c.eps, c.strategy, c.seed, p,
                              0, r.queries_used, ms});
    out.runs.push_back({c.n, c.dim, c.eps, perm_seed, r.queries_used, r.candidate, r.distance});
  }
  return out;
}

CellOutput run_cell(const ExperimentSpec& spec, const Cell& c) {
  switch (spec.task) {
    case Task::spanner: return run_spanner_cell(spec, c);
    case Task::wspd: return run_wspd_cell(spec, c);
    case Task::ann: return run_ann_cell(spec, c);
  }
  return {};
}

std::string with_suffix(const std::string& stem, std::string_view suffix) {
  std::string base = stem;
  if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0) base.resize(base.size() - 4);
  return base + std::string(suffix);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const auto strategies = resolved_strategies(spec);
  const auto seeds = resolved_seeds(spec);

  std::vector<Cell> cells;
  for (std::size_t dim : spec.dims)
    for (std::size_t n : spec.ns)
      for (double eps : spec.eps)
        for (const auto& s : strategies)
          for (std::uint64_t seed : seeds) cells.push_back({dim, n, eps, s, seed});

  std::vector<CellOutput> outputs(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cells.size();) {
      try {
        outputs[k] = run_cell(spec, cells[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned jobs = static_cast<unsigned>(std::min<std::size_t>(spec.jobs, cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentResult result;
  for (auto& o : outputs) {
    result.raw.insert(result.raw.end(), o.rows.begin(), o.rows.end());
    result.ann_runs.insert(result.ann_runs.end(), o.runs.begin(), o.runs.end());
  }
  result.aggregate = aggregate(result.raw);

  if (!spec.out.empty()) {
    result.raw_path = with_suffix(spec.out, ".raw.csv");
    result.aggregate_path = with_suffix(spec.out, ".agg.csv");
    auto raw = open_output(result.raw_path);
    write_raw_csv(raw, result.raw);
    auto agg = open_output(result.aggregate_path);
    write_aggregate_csv(agg, result.aggregate);
    if (spec.task == Task::ann) {
      result.runs_path = with_suffix(spec.out, ".runs.txt");
      auto runs = open_output(result.runs_path);
      write_ann_runs(runs, result.ann_runs);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Aggregation and CSV

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

}  // namespace

std::vector<AggregateRow> aggregate(const std::vector<RawRow>& raw) {
  using Key = std::tuple<int, int, std::size_t, std::size_t, double, std::string>;
  std::map<Key, std::size_t> index;
  std::vector<std::vector<const RawRow*>> groups;
  for (const auto& r : raw) {
    const Key key{static_cast<int>(r.task), static_cast<int>(r.generator), r.dim, r.n, r.eps,
                  r.strategy};
    const auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(&r);
  }

  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    std::vector<double> edges, queries, ms;
    for (const RawRow* r : g) {
      edges.push_back(static_cast<double>(r->edges));
      queries.push_back(static_cast<double>(r->queries));
      ms.push_back(r->runtime_ms);
    }
    const RawRow& f = *g.front();
    const Moments e = moments(edges), q = moments(queries), t = moments(ms);
    out.push_back({f.task, f.generator, f.dim, f.n, f.eps, f.strategy, e.mean, e.std, q.mean, q.std,
                   t.mean, t.std, g.size()});
  }
  return out;
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_raw_csv(std::ostream& out, const std::vector<RawRow>& rows) {
  out << "task,generator,dim,n,eps,strategy,seed,perm,edges,queries,runtime_ms\n";
  for (const auto& r : rows)
    out << to_string(r.task) << ',' << to_string(r.generator) << ',' << r.dim << ',' << r.n << ','
        << format_number(r.eps) << ',' << r.strategy << ',' << r.seed << ',' << r.perm << ','
        << r.edges << ',' << r.queries << ',' << format_number(r.runtime_ms) << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "task,generator,dim,n,eps,strategy,mean_edges,std_edges,mean_queries,std_queries,"
         "mean_runtime_ms,std_runtime_ms,runs\n";
  for (const auto& r : rows)
    out << to_string(r.task) << ',' << to_string(r.generator) << ',' << r.dim << ',' << r.n << ','
        << format_number(r.eps) << ',' << r.strategy << ',' << format_number(r.mean_edges) << ','
        << format_number(r.std_edges) << ',' << format_number(r.mean_queries) << ','
        << format_number(r.std_queries) << ',' << format_number(r.mean_runtime_ms) << ','
        << format_number(r.std_runtime_ms) << ',' << r.runs << '\n';
}

void write_ann_runs(std::ostream& out, const std::vector<AnnRunRecord>& runs) {
  for (const auto& r : runs)
    out << r.n << ' ' << r.dim << ' ' << format_number(r.eps) << ' ' << r.seed << ' ' << r.queries
        << ' ' << r.candidate << ' ' << format_number(r.distance) << '\n';
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Comma-separated list items with surrounding blanks removed.
std::vector<std::string> list_items(std::string_view text) {
  auto items = split(text, ',');
  for (auto& item : items) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
  }
  return items;
}

double to_real(const std::string& s) {
  if (s == "inf") return INFINITY;
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("malformed number '" + s + "' in CSV");
  return x;
}

std::uint64_t to_uint(const std::string& s) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("malformed integer '" + s + "' in CSV");
  return x;
}

// Rows of a CSV keyed by the header's column names.
class CsvTable {
 public:
  explicit CsvTable(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return;
    const auto header = split(trim(line), ',');
    for (std::size_t k = 0; k < header.size(); ++k) columns_[header[k]] = k;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      rows_.push_back(split(trim(line), ','));
      if (rows_.back().size() != header.size()) throw IoError("CSV row has the wrong column count");
    }
  }

  bool has(const std::string& column) const { return columns_.count(column) != 0; }
  std::size_t size() const { return rows_.size(); }
  const std::string& at(std::size_t row, const std::string& column) const {
    const auto it = columns_.find(column);
    if (it == columns_.end()) throw IoError("CSV lacks column '" + column + "'");
    return rows_[row][it->second];
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    return s;
  }

  std::map<std::string, std::size_t> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

std::vector<RawRow> read_raw_csv(std::istream& in) {
  const CsvTable t(in);
  std::vector<RawRow> rows;
  for (std::size_t r = 0; r < t.size(); ++r)
    rows.push_back({parse_task(t.at(r, "task")), parse_generator(t.at(r, "generator")),
                    to_uint(t.at(r, "dim")), to_uint(t.at(r, "n")), to_real(t.at(r, "eps")),
                    t.at(r, "strategy"), to_uint(t.at(r, "seed")), to_uint(t.at(r, "perm")),
                    to_uint(t.at(r, "edges")), to_uint(t.at(r, "queries")),
                    to_real(t.at(r, "runtime_ms"))});
  return rows;
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  const CsvTable t(in);
  std::vector<AggregateRow> rows;
  for (std::size_t r = 0; r < t.size(); ++r)
    rows.push_back({parse_task(t.at(r, "task")), parse_generator(t.at(r, "generator")),
                    to_uint(t.at(r, "dim")), to_uint(t.at(r, "n")), to_real(t.at(r, "eps")),
                    t.at(r, "strategy"), to_real(t.at(r, "mean_edges")),
                    to_real(t.at(r, "std_edges")), to_real(t.at(r, "mean_queries")),
                    to_real(t.at(r, "std_queries")), to_real(t.at(r, "mean_runtime_ms")),
                    to_real(t.at(r, "std_runtime_ms")), to_uint(t.at(r, "runs"))});
  return rows;
}

// ---------------------------------------------------------------------------
// Regression and list parsing

double fit_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InvalidArgument("exponent fit needs at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw InvalidArgument("exponent fit needs positive finite values");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double m = static_cast<double>(points.size());
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("exponent fit needs at least two distinct n values");
  return sxy / sxx;
}

namespace {

template <class T>
T parse_integer(std::string_view s, std::string_view what) {
  T x{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw SpecError("malformed " + std::string(what) + " '" + std::string(s) + "'");
  return x;
}

template <class T>
std::vector<T> parse_integer_list(std::string_view text, std::string_view what) {
  std::vector<T> out;
  for (const auto& item : list_items(text)) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_integer<T>(parts[0], what));
      continue;
    }
    if (parts.size() > 3) throw SpecError("malformed range '" + item + "'");
    const T lo = parse_integer<T>(parts[0], what);
    const T hi = parse_integer<T>(parts[1], what);
    const T step = parts.size() == 3 ? parse_integer<T>(parts[2], what) : T{1};
    if (step == 0 || hi < lo) throw SpecError("empty or invalid range '" + item + "'");
    for (T x = lo; x <= hi; x += step) {
      out.push_back(x);
      if (hi - x < step) break;
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view text) {
  return parse_integer_list<std::size_t>(text, "size");
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  return parse_integer_list<std::uint64_t>(text, "seed");
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : list_items(text)) {
    const auto parts = split(item, '/');
    if (parts.size() > 2) throw SpecError("malformed number '" + item + "'");
    double value = 0.0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      double x = 0.0;
      const auto& s = parts[k];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
      if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw SpecError("malformed number '" + item + "'");
      value = k == 0 ? x : value / x;
    }
    if (!std::isfinite(value)) throw SpecError("number '" + item + "' is not finite");
    out.push_back(value);
  }
  return out;
}

std::vector<std::string> parse_name_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto& item : list_items(text))
    if (!item.empty()) out.push_back(std::move(item));
  if (out.empty()) throw SpecError("empty name list");
  return out;
}

}  // namespace fmetric
