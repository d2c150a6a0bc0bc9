// fmetric command-line front end. Talks to the library only through the C API.
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fmetric/fmetric.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitSpec = 2;

// Thrown after a failed C call; carries the process exit code.
struct Failure {
  int code;
};

void check(fm_status status, const char* context) {
  if (status == FM_OK) return;
  std::cerr << "fmetric: " << context << ": " << fm_last_error() << " (" << fm_status_name(status)
            << ")\n";
  throw Failure{status == FM_ERR_INVALID_SPEC ? kExitSpec : kExitError};
}

struct Options {
  std::string generator;
  std::string dim, n, eps, strategy, seeds, query_dist, max_n;
  std::string out, dump_bounds, dump, plot;
  std::size_t instances = 0, perms = 0;
  unsigned jobs = 1;
  bool emit_svg = false;
  bool timing = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o, bool ann) {
  cmd->add_option("--generator", o.generator, "uniform, normal, clustered or exp");
  cmd->add_option("--dim", o.dim, "dimension list, e.g. 2,3 or 2:5");
  cmd->add_option("--n", o.n, "point counts, e.g. 100,200 or 100:700:100");
  cmd->add_option("--eps", o.eps, "epsilon list, e.g. 0.1,0.5 or 1/32");
  cmd->add_option("--strategy", o.strategy, "strategy list");
  cmd->add_option("--seeds", o.seeds, "instance seeds, e.g. 1,2,3 or 1:5");
  cmd->add_option("--instances", o.instances, "number of derived instance seeds");
  if (ann) {
    cmd->add_option("--perms", o.perms, "permutations per instance");
    cmd->add_option("--query-dist", o.query_dist, "uniform or normal");
  }
  cmd->add_option("--max-n", o.max_n, "largest n accepted");
  cmd->add_option("--out", o.out, "output stem for <out>.raw.csv and <out>.agg.csv");
  cmd->add_flag("--emit-svg", o.emit_svg, "also render plot data as SVG (needs --out)");
  cmd->add_option("--plot", o.plot, "plot kind: edges_vs_n, ratio_vs_n, queries_over_log_n, edges_vs_eps");
  if (!ann) cmd->add_option("--dump-bounds", o.dump_bounds, "directory for final bound matrices");
  cmd->add_option("--dump", o.dump, "directory for built spanners or decompositions");
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  cmd->add_flag("--timing", o.timing, "record runtime_ms (output is then not reproducible)");
  cmd->add_flag("--quiet", o.quiet, "do not print the aggregate table");
}

class Experiment {
 public:
  explicit Experiment(const char* task) { check(fm_experiment_new(task, &handle_), "experiment"); }
  ~Experiment() { fm_experiment_free(handle_); }
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  void set(const char* key, const std::string& value) {
    if (value.empty()) return;
    check(fm_experiment_set(handle_, key, value.c_str()), key);
  }
  fm_experiment* get() const { return handle_; }

 private:
  fm_experiment* handle_ = nullptr;
};

class Results {
 public:
  explicit Results(const Experiment& e) {
    check(fm_experiment_validate(e.get()), "invalid experiment");
    check(fm_experiment_run(e.get(), &handle_), "run");
  }
  ~Results() { fm_results_free(handle_); }
  Results(const Results&) = delete;
  Results& operator=(const Results&) = delete;

  std::vector<fm_aggregate_row> rows() const {
    std::vector<fm_aggregate_row> out(fm_results_aggregate_count(handle_));
    for (std::size_t k = 0; k < out.size(); ++k)
      check(fm_results_aggregate(handle_, k, &out[k]), "results");
    return out;
  }
  std::string path(const char* kind) const { return fm_results_path(handle_, kind); }

 private:
  fm_results* handle_ = nullptr;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void print_table(const std::vector<fm_aggregate_row>& rows) {
  std::printf("%-10s %-4s %-7s %-8s %-22s %12s %10s %12s %5s\n", "generator", "dim", "n", "eps",
              "strategy", "mean_edges", "std_edges", "mean_queries", "runs");
  for (const auto& r : rows)
    std::printf("%-10s %-4zu %-7zu %-8s %-22s %12s %10s %12s %5zu\n", r.generator, r.dim, r.n,
                fmt(r.eps).c_str(), r.strategy, fmt(r.mean_edges).c_str(),
                fmt(r.std_edges).c_str(), fmt(r.mean_queries).c_str(), r.runs);
}

void emit_plot(const std::string& csv, const std::string& kind, const std::string& stem, bool svg) {
  int empty = 0;
  check(fm_emit_plot_data(csv.c_str(), kind.c_str(), stem.c_str(), svg ? 1 : 0, &empty),
        "plot");
  if (empty)
    std::cerr << "fmetric: warning: " << csv << " has no rows; wrote an empty " << stem << ".txt\n";
  else
    std::cerr << "fmetric: wrote " << stem << ".txt" << (svg ? " and " + stem + ".svg" : std::string()) << '\n';
}

// --seeds wins; otherwise FMETRIC_SEED, if set, becomes the master seed.
void apply_seed_env(Experiment& e, const Options& o) {
  if (!o.seeds.empty()) return;
  const char* env = std::getenv("FMETRIC_SEED");
  if (!env || !*env) return;
  e.set("master-seed", env);
}

void configure(Experiment& e, const Options& o) {
  e.set("generator", o.generator);
  e.set("dim", o.dim);
  e.set("n", o.n);
  e.set("eps", o.eps);
  e.set("strategy", o.strategy);
  e.set("seeds", o.seeds);
  if (o.instances) e.set("instances", std::to_string(o.instances));
  if (o.perms) e.set("perms", std::to_string(o.perms));
  e.set("query-dist", o.query_dist);
  e.set("max-n", o.max_n);
  e.set("out", o.out);
  e.set("dump-bounds", o.dump_bounds);
  e.set("dump", o.dump);
  e.set("timing", o.timing ? "1" : "0");
  e.set("jobs", std::to_string(o.jobs));
  apply_seed_env(e, o);
}

std::vector<fm_aggregate_row> run(const char* task, const Options& o,
                                  const std::string& default_plot) {
  if ((o.emit_svg || !o.plot.empty()) && o.out.empty()) {
    std::cerr << "fmetric: --emit-svg and --plot need --out\n";
    throw Failure{kExitSpec};
  }
  Experiment e(task);
  configure(e, o);
  Results r(e);
  auto rows = r.rows();
  if (!o.quiet) print_table(rows);
  if (!o.out.empty()) {
    std::cerr << "fmetric: wrote " << r.path("raw") << " and " << r.path("aggregate") << '\n';
    if (o.emit_svg || !o.plot.empty()) {
      const std::string kind = o.plot.empty() ? default_plot : o.plot;
      emit_plot(r.path("aggregate"), kind, o.out + "." + kind, o.emit_svg);
    }
  }
  return rows;
}

// -- bench presets -----------------------------------------------------------

struct Preset {
  const char* task;
  Options defaults;
  const char* plot;
  const char* summary;
};

std::map<std::string, Preset> presets() {
  std::map<std::string, Preset> p;
  {
    Options o;
    o.generator = "uniform";
    o.dim = "2,3,4";
    o.n = "100:700:100";
    o.eps = "0.1";
    o.strategy = "greedy,blind_greedy";
    p["table1"] = {"spanner", o, "edges_vs_n", "edge-count exponents, uniform points, eps 0.1"};
  }
  {
    Options o;
    o.generator = "normal";
    o.dim = "2";
    o.n = "400";
    o.eps = "0.1";
    o.strategy =
        "blind_greedy,blind_random,blind_random_cf,blind_random_lbf,blind_random_cf_lbf,"
        "quasi_sorted_greedy,quasi_sorted_shaker";
    p["fig2"] = {"spanner", o, "edges_vs_n", "blind strategies on 400 normal points, eps 0.1"};
  }
  {
    Options o;
    o.generator = "uniform";
    o.dim = "2";
    o.n = "400";
    o.eps = "1/32,1/16,1/8,1/4,1/2,1,2";
    o.strategy = "greedy,blind_greedy";
    p["fig5"] = {"spanner", o, "edges_vs_eps", "edges against eps, 400 uniform points"};
  }
  {
    Options o;
    o.generator = "uniform";
    o.dim = "2";
    o.n = "100,1000,10000";
    o.eps = "0.01";
    o.strategy = "ann";
    p["ann-scaling"] = {"ann", o, "queries_over_log_n", "ANN queries / log2 n, uniform points"};
  }
  return p;
}

void merge(Options& o, const Options& d) {
  for (auto [field, fallback] : {std::pair{&o.generator, &d.generator}, {&o.dim, &d.dim},
                                 {&o.n, &d.n}, {&o.eps, &d.eps}, {&o.strategy, &d.strategy}})
    if (field->empty()) *field = *fallback;
}

// Fitted exponent per (dim, strategy) series of the aggregate rows.
void print_exponents(const std::vector<fm_aggregate_row>& rows) {
  std::map<std::pair<std::size_t, std::string>, std::pair<std::vector<double>, std::vector<double>>>
      series;
  for (const auto& r : rows) {
    auto& [x, y] = series[{r.dim, r.strategy}];
    x.push_back(static_cast<double>(r.n));
    y.push_back(r.mean_edges);
  }
  std::printf("\n%-4s %-14s %8s\n", "dim", "strategy", "alpha");
  for (const auto& [key, xy] : series) {
    double alpha = NAN;
    if (fm_fit_exponent(xy.first.data(), xy.second.data(), xy.first.size(), &alpha) == FM_OK)
      std::printf("%-4zu %-14s %8.3f\n", key.first, key.second.c_str(), alpha);
    else
      std::printf("%-4zu %-14s %8s  (%s)\n", key.first, key.second.c_str(), "-", fm_last_error());
  }
}

void print_ann_ratios(const std::vector<fm_aggregate_row>& rows) {
  std::printf("\n%-7s %-8s %16s\n", "n", "eps", "queries/log2(n)");
  for (const auto& r : rows)
    if (r.n >= 2)
      std::printf("%-7zu %-8s %16.4f\n", r.n, fmt(r.eps).c_str(),
                  r.mean_queries / std::log2(static_cast<double>(r.n)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fmetric: metric spanners and nearest neighbors under a distance-query cost model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fm_version()));

  Options spanner_opt, ann_opt, wspd_opt, bench_opt;
  auto* spanner = app.add_subcommand("spanner", "build spanners and report edges and queries");
  add_common(spanner, spanner_opt, false);
  auto* ann = app.add_subcommand("ann", "approximate nearest neighbor searches");
  add_common(ann, ann_opt, true);
  auto* wspd = app.add_subcommand("wspd", "well-separated pair decompositions");
  add_common(wspd, wspd_opt, false);

  const auto preset_table = presets();
  std::string preset_name;
  auto* bench = app.add_subcommand("bench", "run a named benchmark preset");
  std::vector<std::string> preset_names;
  for (const auto& [name, _] : preset_table) preset_names.push_back(name);
  bench->add_option("preset", preset_name, "table1, fig2, fig5 or ann-scaling")
      ->required()
      ->check(CLI::IsMember(preset_names));
  add_common(bench, bench_opt, true);

  std::string plot_csv, plot_kind, plot_out;
  bool plot_svg = false;
  auto* plot = app.add_subcommand("plot", "turn a harness CSV into plot data");
  plot->add_option("csv", plot_csv, "raw or aggregate CSV")->required();
  plot->add_option("--kind", plot_kind, "edges_vs_n, ratio_vs_n, queries_over_log_n, edges_vs_eps")
      ->required();
  plot->add_option("--out", plot_out, "output stem")->required();
  plot->add_flag("--emit-svg", plot_svg, "also write an SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSpec;
  }

  try {
    if (spanner->parsed()) {
      run("spanner", spanner_opt, "edges_vs_n");
    } else if (ann->parsed()) {
      run("ann", ann_opt, "queries_over_log_n");
    } else if (wspd->parsed()) {
      run("wspd", wspd_opt, "edges_vs_n");
    } else if (bench->parsed()) {
      const Preset& p = preset_table.at(preset_name);
      merge(bench_opt, p.defaults);
      std::cerr << "fmetric: bench " << preset_name << ": " << p.summary << '\n';
      const auto rows = run(p.task, bench_opt, p.plot);
      if (preset_name == "table1") print_exponents(rows);
      if (preset_name == "ann-scaling") print_ann_ratios(rows);
    } else if (plot->parsed()) {
      emit_plot(plot_csv, plot_kind, plot_out, plot_svg);
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
