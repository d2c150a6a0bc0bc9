#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmetric/error.hpp"
#include "fmetric/harness.hpp"
#include "fmetric/plot.hpp"
#include "oracles.hpp"

using namespace fmetric;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fmetric_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentSpec small_spanner_spec() {
  ExperimentSpec s;
  s.task = Task::spanner;
  s.generator = Generator::normal;
  s.dims = {2, 3};
  s.ns = {10, 20};
  s.eps = {0.5};
  s.strategies = {"greedy", "blind_greedy", "blind_random_cf"};
  s.seeds = {1, 2, 3};
  return s;
}

}  // namespace

TEST_CASE("fit_exponent examples") {
  CHECK(fit_exponent({{100, 100}, {200, 200}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_exponent({{100, 10000}, {200, 40000}}) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<std::pair<double, double>> noisy{{100, 130}, {200, 270}, {400, 600}, {700, 980}};
  CHECK(fit_exponent(noisy) == doctest::Approx(oracle::loglog_slope(noisy)).epsilon(1e-12));
  CHECK_THROWS_AS(fit_exponent({{100, 5}}), InvalidArgument);
  CHECK_THROWS_AS(fit_exponent({{100, 5}, {100, 7}}), InvalidArgument);
  CHECK_THROWS_AS(fit_exponent({{100, 0}, {200, 7}}), InvalidArgument);
}

TEST_CASE("list parsing") {
  CHECK(parse_size_list("100:700:100") ==
        std::vector<std::size_t>{100, 200, 300, 400, 500, 600, 700});
  CHECK(parse_size_list("2,5,3:4") == std::vector<std::size_t>{2, 5, 3, 4});
  CHECK(parse_seed_list("1:3") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(parse_real_list("1/32,0.5,2") == std::vector<double>{0.03125, 0.5, 2.0});
  CHECK(parse_name_list("greedy, blind_greedy") ==
        std::vector<std::string>{"greedy", "blind_greedy"});
  CHECK_THROWS_AS(parse_size_list("5:2"), SpecError);
  CHECK_THROWS_AS(parse_size_list("x"), SpecError);
  CHECK_THROWS_AS(parse_real_list("1/0"), SpecError);
  CHECK_THROWS_AS(parse_size_list(""), SpecError);
}

TEST_CASE("format_number round trips") {
  for (double x : {0.1, 1.0 / 3.0, 79800.0, 1e-300, 0.0, 123456789.125}) {
    const std::string s = format_number(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(400.0) == "400");
}

TEST_CASE("spec validation") {
  ExperimentSpec s = small_spanner_spec();
  CHECK_NOTHROW(validate(s));
  ExperimentSpec bad = s;
  bad.ns.clear();
  CHECK_THROWS_AS(validate(bad), SpecError);
  bad = s;
  bad.eps = {0.0};
  CHECK_THROWS_AS(validate(bad), SpecError);
  bad = s;
  bad.strategies = {"ann"};
  CHECK_THROWS_AS(validate(bad), SpecError);
  bad = s;
  bad.ns = {5000};
  CHECK_THROWS_AS(validate(bad), SpecError);
  bad.max_n = 5000;
  CHECK_NOTHROW(validate(bad));
  bad = s;
  bad.strategies = {"wspd_quadtree"};
  bad.eps = {2.0};
  CHECK_THROWS_AS(validate(bad), SpecError);
  bad = s;
  bad.dims = {0};
  CHECK_THROWS_AS(validate(bad), SpecError);

  ExperimentSpec ann;
  ann.task = Task::ann;
  ann.ns = {100};
  ann.eps = {0.0};
  CHECK_NOTHROW(validate(ann));
  CHECK(resolved_seeds(ann).size() == 10);
  CHECK(resolved_strategies(ann) == std::vector<std::string>{"ann"});
  CHECK(resolved_max_n(ann) == kDefaultAnnMaxN);
  CHECK(resolved_seeds(s) == s.seeds);
}

TEST_CASE("two points give one edge") {
  ExperimentSpec s;
  s.ns = {2};
  s.eps = {0.1};
  s.strategies = {"blind_greedy", "greedy", "quasi_sorted_shaker", "wspd_covertree"};
  s.seeds = {4};
  const ExperimentResult r = run_experiment(s);
  REQUIRE(r.raw.size() == 4);
  for (const auto& row : r.raw) CHECK(row.edges == 1);
}

TEST_CASE("aggregates are recomputable from raw rows") {
  const ExperimentResult r = run_experiment(small_spanner_spec());
  CHECK(r.raw.size() == 2 * 2 * 3 * 3);
  REQUIRE(r.aggregate.size() == 2 * 2 * 3);
  CHECK(aggregate(r.raw).size() == r.aggregate.size());
  for (const auto& a : r.aggregate) {
    std::vector<double> e;
    for (const auto& row : r.raw)
      if (row.dim == a.dim && row.n == a.n && row.strategy == a.strategy)
        e.push_back(static_cast<double>(row.edges));
    REQUIRE(e.size() == 3);
    CHECK(a.runs == 3);
    const double mean = (e[0] + e[1] + e[2]) / 3;
    double ss = 0;
    for (double x : e) ss += (x - mean) * (x - mean);
    CHECK(a.mean_edges == doctest::Approx(mean).epsilon(1e-12));
    CHECK(a.std_edges == doctest::Approx(std::sqrt(ss / 2)).epsilon(1e-12));
  }
  for (const auto& row : r.raw) {
    if (row.strategy == "greedy") CHECK(row.queries == row.n * (row.n - 1) / 2);
    else CHECK(row.edges == row.queries);
    CHECK(row.runtime_ms == 0.0);
  }
}

TEST_CASE("CSV files round trip and replay byte for byte") {
  const fs::path dir = scratch_dir("csv");
  ExperimentSpec s = small_spanner_spec();
  s.out = (dir / "a").string();
  s.jobs = 3;
  const ExperimentResult r = run_experiment(s);
  CHECK(r.raw_path == s.out + ".raw.csv");
  CHECK(r.aggregate_path == s.out + ".agg.csv");
  const std::string raw = slurp(r.raw_path), agg = slurp(r.aggregate_path);
  CHECK(raw.rfind("task,generator,dim,n,eps,strategy,seed,perm,edges,queries,runtime_ms\n", 0) == 0);
  CHECK(agg.rfind("task,generator,dim,n,eps,strategy,mean_edges,std_edges,mean_queries,"
                  "std_queries,mean_runtime_ms,std_runtime_ms,runs\n",
                  0) == 0);

  std::istringstream raw_in(raw), agg_in(agg);
  const auto raw_rows = read_raw_csv(raw_in);
  CHECK(raw_rows.size() == r.raw.size());
  std::ostringstream raw_out, agg_out;
  write_raw_csv(raw_out, raw_rows);
  write_aggregate_csv(agg_out, read_aggregate_csv(agg_in));
  CHECK(raw_out.str() == raw);
  CHECK(agg_out.str() == agg);

  s.out = (dir / "b").string();
  s.jobs = 1;
  run_experiment(s);
  CHECK(slurp(s.out + ".raw.csv") == raw);
  CHECK(slurp(s.out + ".agg.csv") == agg);
  fs::remove_all(dir);
}

TEST_CASE("ann experiments write per-run records") {
  const fs::path dir = scratch_dir("ann");
  ExperimentSpec s;
  s.task = Task::ann;
  s.ns = {50};
  s.eps = {0.1};
  s.instances = 2;
  s.perms = 3;
  s.strategies = {"ann", "ann_prefilter"};
  s.out = (dir / "x.csv").string();
  const ExperimentResult r = run_experiment(s);
  CHECK(r.raw.size() == 2 * 2 * 3);
  CHECK(r.ann_runs.size() == r.raw.size());
  CHECK(r.runs_path == (dir / "x.runs.txt").string());
  std::istringstream runs(slurp(r.runs_path));
  std::size_t lines = 0;
  for (std::string line; std::getline(runs, line); ++lines) {
    std::istringstream fields(line);
    std::size_t n, dim, queries, candidate;
    double eps, distance;
    std::uint64_t seed;
    REQUIRE(static_cast<bool>(fields >> n >> dim >> eps >> seed >> queries >> candidate >> distance));
    CHECK(n == 50);
    CHECK(queries >= 1);
  }
  CHECK(lines == r.ann_runs.size());
  for (const auto& row : r.raw) CHECK(row.edges == 0);
  fs::remove_all(dir);
}

TEST_CASE("wspd experiments and dumps") {
  const fs::path dir = scratch_dir("wspd");
  ExperimentSpec s;
  s.task = Task::wspd;
  s.ns = {30};
  s.eps = {0.5};
  s.seeds = {1};
  s.dump_dir = (dir / "dump").string();
  const ExperimentResult r = run_experiment(s);
  REQUIRE(r.raw.size() == 2);
  CHECK(r.raw[0].strategy == "wspd_quadtree");
  CHECK(r.raw[1].strategy == "wspd_covertree");
  CHECK(r.raw[1].queries > r.raw[1].edges);
  CHECK(r.raw[0].queries == r.raw[0].edges);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(s.dump_dir)) ++files;
  CHECK(files == 2);
  fs::remove_all(dir);
}

TEST_CASE("bound dumps") {
  const fs::path dir = scratch_dir("bounds");
  ExperimentSpec s;
  s.ns = {6};
  s.eps = {0.5};
  s.seeds = {1};
  s.strategies = {"blind_greedy", "greedy"};
  s.dump_bounds_dir = dir.string();
  run_experiment(s);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++files;
    CHECK(slurp(e.path().string()).rfind("6\n", 0) == 0);
  }
  CHECK(files == 1);  // greedy keeps no bounds
  fs::remove_all(dir);
}

TEST_CASE("plot data") {
  const fs::path dir = scratch_dir("plot");
  ExperimentSpec s = small_spanner_spec();
  s.out = (dir / "r").string();
  run_experiment(s);

  const PlotFiles f = emit_plot_data(s.out + ".agg.csv", PlotKind::ratio_vs_n,
                                     (dir / "ratio").string(), true);
  CHECK_FALSE(f.empty);
  const std::string text = slurp(f.text_path);
  CHECK(text.rfind("# ratio_vs_n x=n y=edges / n\n", 0) == 0);
  CHECK(text.find("normal:greedy:d2:eps0.5 10 ") != std::string::npos);
  CHECK(slurp(f.svg_path).rfind("<svg", 0) == 0);

  const PlotFiles from_raw = emit_plot_data(s.out + ".raw.csv", PlotKind::ratio_vs_n,
                                            (dir / "ratio_raw").string(), false);
  CHECK(slurp(from_raw.text_path) == text);
  CHECK(from_raw.svg_path.empty());

  { std::ofstream(dir / "empty.csv"); }
  const PlotFiles e = emit_plot_data((dir / "empty.csv").string(), PlotKind::edges_vs_n,
                                     (dir / "e").string(), true);
  CHECK(e.empty);
  CHECK(slurp(e.text_path).empty());
  CHECK_FALSE(fs::exists(dir / "e.svg"));
  CHECK_THROWS_AS(parse_plot_kind("pie"), InvalidArgument);
  CHECK_THROWS_AS(emit_plot_data((dir / "missing.csv").string(), PlotKind::edges_vs_n,
                                 (dir / "m").string(), false),
                  IoError);
  fs::remove_all(dir);
}
