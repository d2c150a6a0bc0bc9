#include "fmetric/fmetric.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "fmetric/ann.hpp"
#include "fmetric/bounds.hpp"
#include "fmetric/error.hpp"
#include "fmetric/harness.hpp"
#include "fmetric/metric.hpp"
#include "fmetric/plot.hpp"
#include "fmetric/spanner.hpp"
#include "fmetric/wspd.hpp"

using namespace fmetric;

struct fm_pointset {
  std::shared_ptr<const PointSet> points;
};

struct fm_oracle {
  DistanceOracle oracle;
};

struct fm_bounds {
  BoundMatrix bounds;
};

struct fm_spanner {
  Spanner spanner;
};

struct fm_wspd {
  Wspd wspd;
};

struct fm_experiment {
  ExperimentSpec spec;
};

struct fm_results {
  ExperimentResult result;
  std::vector<std::string> names;  // task and generator names handed out by pointer
};

namespace {

thread_local std::string last_error;

fm_status fail(fm_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
fm_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FM_OK;
  } catch (const SpecError& e) {
    return fail(FM_ERR_INVALID_SPEC, e.what());
  } catch (const InvalidArgument& e) {
    return fail(FM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const IndexOutOfRange& e) {
    return fail(FM_ERR_OUT_OF_RANGE, e.what());
  } catch (const InconsistentMetric& e) {
    return fail(FM_ERR_INCONSISTENT_METRIC, e.what());
  } catch (const IoError& e) {
    return fail(FM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FM_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw InvalidArgument(std::string(what) + " must not be null");
}

bool parse_flag(std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw SpecError("expected a boolean, got '" + std::string(v) + "'");
}

std::uint64_t parse_single(std::string_view v, const char* what) {
  const auto list = parse_seed_list(v);
  if (list.size() != 1) throw SpecError(std::string(what) + " takes a single integer");
  return list.front();
}

}  // namespace

extern "C" {

const char* fm_last_error(void) { return last_error.c_str(); }

const char* fm_version(void) { return "0.3.0"; }

const char* fm_status_name(fm_status status) {
  switch (status) {
    case FM_OK: return "ok";
    case FM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FM_ERR_OUT_OF_RANGE: return "index out of range";
    case FM_ERR_INCONSISTENT_METRIC: return "inconsistent metric";
    case FM_ERR_IO: return "i/o error";
    case FM_ERR_INVALID_SPEC: return "invalid experiment spec";
    case FM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// -- point sets --------------------------------------------------------------

fm_status fm_pointset_generate(const char* generator, size_t dim, size_t n, uint64_t seed,
                               fm_pointset** out) {
  return guarded([&] {
    require(generator, "generator");
    require(out, "out");
    *out = new fm_pointset{std::make_shared<const PointSet>(
        generate_pointset(parse_generator(generator), dim, n, seed))};
  });
}

fm_status fm_pointset_from_coords(size_t dim, size_t n, const double* coords, fm_pointset** out) {
  return guarded([&] {
    require(out, "out");
    if (n * dim > 0) require(coords, "coords");
    std::vector<double> v(coords, coords + n * dim);
    *out = new fm_pointset{std::make_shared<const PointSet>(dim, std::move(v))};
  });
}

fm_status fm_pointset_read(const char* path, fm_pointset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot read ") + path);
    *out = new fm_pointset{std::make_shared<const PointSet>(read_pointset(in, path))};
  });
}

fm_status fm_pointset_write(const fm_pointset* points, const char* path) {
  return guarded([&] {
    require(points, "points");
    require(path, "path");
    std::ofstream out(path);
    if (!out) throw IoError(std::string("cannot write ") + path);
    write_pointset(out, *points->points);
  });
}

size_t fm_pointset_size(const fm_pointset* points) { return points ? points->points->size() : 0; }

size_t fm_pointset_dim(const fm_pointset* points) { return points ? points->points->dim() : 0; }

fm_status fm_pointset_point(const fm_pointset* points, size_t i, double* coords) {
  return guarded([&] {
    require(points, "points");
    require(coords, "coords");
    const auto p = points->points->point(i);
    std::copy(p.begin(), p.end(), coords);
  });
}

void fm_pointset_free(fm_pointset* points) { delete points; }

// -- oracle ------------------------------------------------------------------

fm_status fm_oracle_new(const fm_pointset* points, uint64_t approx_seed, fm_oracle** out) {
  return guarded([&] {
    require(points, "points");
    require(out, "out");
    *out = new fm_oracle{DistanceOracle(points->points, approx_seed)};
  });
}

fm_status fm_oracle_exact(fm_oracle* oracle, size_t i, size_t j, double* distance) {
  return guarded([&] {
    require(oracle, "oracle");
    require(distance, "distance");
    *distance = oracle->oracle.exact(i, j);
  });
}

fm_status fm_oracle_approx(fm_oracle* oracle, size_t i, size_t j, double* distance) {
  return guarded([&] {
    require(oracle, "oracle");
    require(distance, "distance");
    *distance = oracle->oracle.approx(i, j);
  });
}

uint64_t fm_oracle_query_count(const fm_oracle* oracle) {
  return oracle ? oracle->oracle.exact_query_count() : 0;
}

void fm_oracle_free(fm_oracle* oracle) { delete oracle; }

// -- bounds ------------------------------------------------------------------

fm_status fm_bounds_new(size_t n, fm_bounds** out) {
  return guarded([&] {
    require(out, "out");
    *out = new fm_bounds{BoundMatrix(n)};
  });
}

fm_status fm_bounds_reveal(fm_bounds* bounds, size_t i, size_t j, double distance) {
  return guarded([&] {
    require(bounds, "bounds");
    bounds->bounds.reveal(i, j, distance);
  });
}

fm_status fm_bounds_get(const fm_bounds* bounds, size_t i, size_t j, double* lower,
                        double* upper) {
  return guarded([&] {
    require(bounds, "bounds");
    const double a = bounds->bounds.lower(i, j);
    const double b = bounds->bounds.upper(i, j);
    if (lower) *lower = a;
    if (upper) *upper = b;
  });
}

fm_status fm_bounds_write(const fm_bounds* bounds, const char* path) {
  return guarded([&] {
    require(bounds, "bounds");
    require(path, "path");
    std::ofstream out(path);
    if (!out) throw IoError(std::string("cannot write ") + path);
    bounds->bounds.dump(out);
  });
}

void fm_bounds_free(fm_bounds* bounds) { delete bounds; }

// -- spanners ----------------------------------------------------------------

fm_status fm_spanner_build(fm_oracle* oracle, double eps, const char* strategy, uint64_t seed,
                           fm_spanner** out) {
  return guarded([&] {
    require(oracle, "oracle");
    require(strategy, "strategy");
    require(out, "out");
    const std::string_view name(strategy);
    Spanner s;
    if (name.rfind("wspd_", 0) == 0)
      s = build_wspd_spanner(oracle->oracle, eps, parse_wspd_backend(name.substr(5)));
    else
      s = build_spanner(oracle->oracle, eps, Strategy::parse(name), seed);
    *out = new fm_spanner{std::move(s)};
  });
}

size_t fm_spanner_edge_count(const fm_spanner* spanner) {
  return spanner ? spanner->spanner.edges.size() : 0;
}

uint64_t fm_spanner_queries(const fm_spanner* spanner) {
  return spanner ? spanner->spanner.queries_used : 0;
}

fm_status fm_spanner_edge(const fm_spanner* spanner, size_t k, size_t* i, size_t* j,
                          double* weight) {
  return guarded([&] {
    require(spanner, "spanner");
    if (k >= spanner->spanner.edges.size()) throw IndexOutOfRange("edge index out of range");
    const Edge& e = spanner->spanner.edges[k];
    if (i) *i = e.i;
    if (j) *j = e.j;
    if (weight) *weight = e.weight;
  });
}

fm_status fm_spanner_stretch(const fm_spanner* spanner, const fm_pointset* points,
                             double* stretch) {
  return guarded([&] {
    require(spanner, "spanner");
    require(points, "points");
    require(stretch, "stretch");
    *stretch = verify_stretch(spanner->spanner, *points->points);
  });
}

fm_status fm_spanner_write(const fm_spanner* spanner, const char* path) {
  return guarded([&] {
    require(spanner, "spanner");
    require(path, "path");
    std::ofstream out(path);
    if (!out) throw IoError(std::string("cannot write ") + path);
    write_spanner(out, spanner->spanner);
  });
}

void fm_spanner_free(fm_spanner* spanner) { delete spanner; }

// -- WSPD --------------------------------------------------------------------

fm_status fm_wspd_build(fm_oracle* oracle, double separation, const char* backend,
                        fm_wspd** out) {
  return guarded([&] {
    require(oracle, "oracle");
    require(backend, "backend");
    require(out, "out");
    *out = new fm_wspd{build_wspd(oracle->oracle, separation, parse_wspd_backend(backend))};
  });
}

size_t fm_wspd_pair_count(const fm_wspd* wspd) { return wspd ? wspd->wspd.pairs.size() : 0; }

fm_status fm_wspd_pair(const fm_wspd* wspd, size_t k, size_t* size_a, size_t* size_b,
                       size_t* rep_a, size_t* rep_b) {
  return guarded([&] {
    require(wspd, "wspd");
    if (k >= wspd->wspd.pairs.size()) throw IndexOutOfRange("pair index out of range");
    const WspdPair& p = wspd->wspd.pairs[k];
    if (size_a) *size_a = p.a.size();
    if (size_b) *size_b = p.b.size();
    if (rep_a) *rep_a = p.rep_a;
    if (rep_b) *rep_b = p.rep_b;
  });
}

fm_status fm_wspd_write(const fm_wspd* wspd, const char* path) {
  return guarded([&] {
    require(wspd, "wspd");
    require(path, "path");
    std::ofstream out(path);
    if (!out) throw IoError(std::string("cannot write ") + path);
    write_wspd(out, wspd->wspd);
  });
}

void fm_wspd_free(fm_wspd* wspd) { delete wspd; }

// -- ANN ---------------------------------------------------------------------

fm_status fm_ann_search(const fm_pointset* points, const double* query, double eps, uint64_t seed,
                        int prefilter, fm_ann_result* out) {
  return guarded([&] {
    require(points, "points");
    require(query, "query");
    require(out, "out");
    const std::size_t dim = points->points->dim();
    AnnInstance instance =
        make_ann_instance(points->points, std::vector<double>(query, query + dim), eps);
    DistanceOracle oracle(points->points, seed);
    if (prefilter) instance = prefilter_with_approx(instance, oracle);
    const AnnResult r = ann_search(instance, oracle, seed);
    *out = {r.candidate, r.distance, r.queries_used};
  });
}

// -- experiments -------------------------------------------------------------

fm_status fm_experiment_new(const char* task, fm_experiment** out) {
  return guarded([&] {
    require(task, "task");
    require(out, "out");
    auto e = std::make_unique<fm_experiment>();
    e->spec.task = parse_task(task);
    *out = e.release();
  });
}

fm_status fm_experiment_set(fm_experiment* experiment, const char* key, const char* value) {
  return guarded([&] {
    require(experiment, "experiment");
    require(key, "key");
    require(value, "value");
    ExperimentSpec& s = experiment->spec;
    const std::string_view k(key), v(value);
    if (k == "generator") {
      try {
        s.generator = parse_generator(v);
      } catch (const InvalidArgument& e) {
        throw SpecError(e.what());
      }
    } else if (k == "dim") {
      s.dims = parse_size_list(v);
    } else if (k == "n") {
      s.ns = parse_size_list(v);
    } else if (k == "eps") {
      s.eps = parse_real_list(v);
    } else if (k == "strategy") {
      s.strategies = parse_name_list(v);
    } else if (k == "seeds") {
      s.seeds = parse_seed_list(v);
    } else if (k == "instances") {
      s.instances = parse_single(v, "instances");
    } else if (k == "master-seed") {
      s.master_seed = parse_single(v, "master-seed");
    } else if (k == "perms") {
      s.perms = parse_single(v, "perms");
    } else if (k == "query-dist") {
      s.query_dist = parse_query_dist(v);
    } else if (k == "max-n") {
      s.max_n = parse_single(v, "max-n");
    } else if (k == "out") {
      s.out = v;
    } else if (k == "dump-bounds") {
      s.dump_bounds_dir = v;
    } else if (k == "dump") {
      s.dump_dir = v;
    } else if (k == "timing") {
      s.timing = parse_flag(v);
    } else if (k == "jobs") {
      s.jobs = static_cast<unsigned>(parse_single(v, "jobs"));
    } else {
      throw SpecError("unknown experiment setting '" + std::string(k) + "'");
    }
  });
}

fm_status fm_experiment_validate(const fm_experiment* experiment) {
  return guarded([&] {
    require(experiment, "experiment");
    validate(experiment->spec);
  });
}

fm_status fm_experiment_run(const fm_experiment* experiment, fm_results** out) {
  return guarded([&] {
    require(experiment, "experiment");
    require(out, "out");
    auto r = std::make_unique<fm_results>();
    r->result = run_experiment(experiment->spec);
    for (const auto& row : r->result.aggregate) {
      r->names.emplace_back(to_string(row.task));
      r->names.emplace_back(to_string(row.generator));
    }
    *out = r.release();
  });
}

void fm_experiment_free(fm_experiment* experiment) { delete experiment; }

size_t fm_results_raw_count(const fm_results* results) {
  return results ? results->result.raw.size() : 0;
}

size_t fm_results_aggregate_count(const fm_results* results) {
  return results ? results->result.aggregate.size() : 0;
}

fm_status fm_results_aggregate(const fm_results* results, size_t k, fm_aggregate_row* row) {
  return guarded([&] {
    require(results, "results");
    require(row, "row");
    if (k >= results->result.aggregate.size()) throw IndexOutOfRange("row index out of range");
    const AggregateRow& a = results->result.aggregate[k];
    *row = {results->names[2 * k].c_str(),
            results->names[2 * k + 1].c_str(),
            a.strategy.c_str(),
            a.dim,
            a.n,
            a.eps,
            a.mean_edges,
            a.std_edges,
            a.mean_queries,
            a.std_queries,
            a.mean_runtime_ms,
            a.std_runtime_ms,
            a.runs};
  });
}

const char* fm_results_path(const fm_results* results, const char* kind) {
  if (!results || !kind) return "";
  const std::string_view k(kind);
  if (k == "raw") return results->result.raw_path.c_str();
  if (k == "aggregate") return results->result.aggregate_path.c_str();
  if (k == "runs") return results->result.runs_path.c_str();
  return "";
}

void fm_results_free(fm_results* results) { delete results; }

fm_status fm_fit_exponent(const double* x, const double* y, size_t count, double* alpha) {
  return guarded([&] {
    require(alpha, "alpha");
    if (count) {
      require(x, "x");
      require(y, "y");
    }
    std::vector<std::pair<double, double>> pts;
    for (size_t k = 0; k < count; ++k) pts.emplace_back(x[k], y[k]);
    *alpha = fit_exponent(pts);
  });
}

fm_status fm_emit_plot_data(const char* csv_path, const char* kind, const char* out_stem, int svg,
                            int* empty) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(kind, "kind");
    require(out_stem, "out_stem");
    const PlotFiles files = emit_plot_data(csv_path, parse_plot_kind(kind), out_stem, svg != 0);
    if (empty) *empty = files.empty ? 1 : 0;
  });
}

}  // extern "C"
