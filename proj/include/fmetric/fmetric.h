/* fmetric: finite metric spaces under a distance-query cost model. C interface. */
#ifndef FMETRIC_FMETRIC_H
#define FMETRIC_FMETRIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FMETRIC_BUILDING)
#    define FM_API __declspec(dllexport)
#  else
#    define FM_API __declspec(dllimport)
#  endif
#else
#  define FM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fm_status {
  FM_OK = 0,
  FM_ERR_INVALID_ARGUMENT = 1,
  FM_ERR_OUT_OF_RANGE = 2,
  FM_ERR_INCONSISTENT_METRIC = 3,
  FM_ERR_IO = 4,
  FM_ERR_INVALID_SPEC = 5,
  FM_ERR_INTERNAL = 6
} fm_status;

typedef struct fm_pointset fm_pointset;
typedef struct fm_oracle fm_oracle;
typedef struct fm_bounds fm_bounds;
typedef struct fm_spanner fm_spanner;
typedef struct fm_wspd fm_wspd;
typedef struct fm_experiment fm_experiment;
typedef struct fm_results fm_results;

/* Message for the last failed call on this thread ("" if none). */
FM_API const char* fm_last_error(void);
FM_API const char* fm_version(void);
FM_API const char* fm_status_name(fm_status status);

/* Point sets. generator: uniform, normal, clustered, exp. */
FM_API fm_status fm_pointset_generate(const char* generator, size_t dim, size_t n, uint64_t seed,
                                      fm_pointset** out);
FM_API fm_status fm_pointset_from_coords(size_t dim, size_t n, const double* coords,
                                         fm_pointset** out);
FM_API fm_status fm_pointset_read(const char* path, fm_pointset** out);
FM_API fm_status fm_pointset_write(const fm_pointset* points, const char* path);
FM_API size_t fm_pointset_size(const fm_pointset* points);
FM_API size_t fm_pointset_dim(const fm_pointset* points);
FM_API fm_status fm_pointset_point(const fm_pointset* points, size_t i, double* coords);
FM_API void fm_pointset_free(fm_pointset* points);

/* Counting distance oracle over a point set (which it keeps alive). */
FM_API fm_status fm_oracle_new(const fm_pointset* points, uint64_t approx_seed, fm_oracle** out);
FM_API fm_status fm_oracle_exact(fm_oracle* oracle, size_t i, size_t j, double* distance);
FM_API fm_status fm_oracle_approx(fm_oracle* oracle, size_t i, size_t j, double* distance);
FM_API uint64_t fm_oracle_query_count(const fm_oracle* oracle);
FM_API void fm_oracle_free(fm_oracle* oracle);

/* Lower/upper bound matrix. */
FM_API fm_status fm_bounds_new(size_t n, fm_bounds** out);
FM_API fm_status fm_bounds_reveal(fm_bounds* bounds, size_t i, size_t j, double distance);
FM_API fm_status fm_bounds_get(const fm_bounds* bounds, size_t i, size_t j, double* lower,
                               double* upper);
FM_API fm_status fm_bounds_write(const fm_bounds* bounds, const char* path);
FM_API void fm_bounds_free(fm_bounds* bounds);

/* Spanners. strategy: blind_random[_cf][_lbf], blind_greedy, quasi_sorted_greedy,
   quasi_sorted_shaker, greedy, wspd_quadtree, wspd_covertree. */
FM_API fm_status fm_spanner_build(fm_oracle* oracle, double eps, const char* strategy,
                                  uint64_t seed, fm_spanner** out);
FM_API size_t fm_spanner_edge_count(const fm_spanner* spanner);
FM_API uint64_t fm_spanner_queries(const fm_spanner* spanner);
FM_API fm_status fm_spanner_edge(const fm_spanner* spanner, size_t k, size_t* i, size_t* j,
                                 double* weight);
FM_API fm_status fm_spanner_stretch(const fm_spanner* spanner, const fm_pointset* points,
                                    double* stretch);
FM_API fm_status fm_spanner_write(const fm_spanner* spanner, const char* path);
FM_API void fm_spanner_free(fm_spanner* spanner);

/* Well-separated pair decompositions. backend: quadtree, covertree. */
FM_API fm_status fm_wspd_build(fm_oracle* oracle, double separation, const char* backend,
                               fm_wspd** out);
FM_API size_t fm_wspd_pair_count(const fm_wspd* wspd);
FM_API fm_status fm_wspd_pair(const fm_wspd* wspd, size_t k, size_t* size_a, size_t* size_b,
                              size_t* rep_a, size_t* rep_b);
FM_API fm_status fm_wspd_write(const fm_wspd* wspd, const char* path);
FM_API void fm_wspd_free(fm_wspd* wspd);

/* Approximate nearest neighbor of `query` (dim coordinates). */
typedef struct fm_ann_result {
  size_t candidate;
  double distance;
  uint64_t queries;
} fm_ann_result;

FM_API fm_status fm_ann_search(const fm_pointset* points, const double* query, double eps,
                               uint64_t seed, int prefilter, fm_ann_result* out);

/* Experiments. task: spanner, ann, wspd. Keys for fm_experiment_set:
   generator, dim, n, eps, strategy, seeds, instances, master-seed, perms,
   query-dist, max-n, out, dump-bounds, dump, timing (0/1), jobs.
   List values use commas and lo:hi[:step] ranges. */
FM_API fm_status fm_experiment_new(const char* task, fm_experiment** out);
FM_API fm_status fm_experiment_set(fm_experiment* experiment, const char* key, const char* value);
FM_API fm_status fm_experiment_validate(const fm_experiment* experiment);
FM_API fm_status fm_experiment_run(const fm_experiment* experiment, fm_results** out);
FM_API void fm_experiment_free(fm_experiment* experiment);

typedef struct fm_aggregate_row {
  const char* task;
  const char* generator;
  const char* strategy;
  size_t dim;
  size_t n;
  double eps;
  double mean_edges;
  double std_edges;
  double mean_queries;
  double std_queries;
  double mean_runtime_ms;
  double std_runtime_ms;
  size_t runs;
} fm_aggregate_row;

FM_API size_t fm_results_raw_count(const fm_results* results);
FM_API size_t fm_results_aggregate_count(const fm_results* results);
/* Strings in `row` stay valid until the results are freed. */
FM_API fm_status fm_results_aggregate(const fm_results* results, size_t k, fm_aggregate_row* row);
/* Output files ("" when not written). kind: raw, aggregate, runs. */
FM_API const char* fm_results_path(const fm_results* results, const char* kind);
FM_API void fm_results_free(fm_results* results);

/* Least-squares slope of log(y) on log(x). */
FM_API fm_status fm_fit_exponent(const double* x, const double* y, size_t count, double* alpha);

/* kind: edges_vs_n, ratio_vs_n, queries_over_log_n, edges_vs_eps. Writes
   <out_stem>.txt and, if svg is nonzero, <out_stem>.svg. *empty is set when
   the input had no rows. */
FM_API fm_status fm_emit_plot_data(const char* csv_path, const char* kind, const char* out_stem,
                                   int svg, int* empty);

#ifdef __cplusplus
}
#endif

#endif /* FMETRIC_FMETRIC_H */
