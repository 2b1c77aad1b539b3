/* C interface to the mmsv code-verification library.
 *
 * All functions return an mmsv_status; on failure a description is available
 * from mmsv_last_error() on the calling thread. Handles are opaque and must be
 * released with the matching destroy function. Indices are 0-based unless
 * stated otherwise.
 */
#ifndef MMSV_MMSV_H
#define MMSV_MMSV_H

#include <stddef.h>

#if defined(MMSV_BUILDING_LIBRARY)
#define MMSV_API __attribute__((visibility("default")))
#else
#define MMSV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmsv_status {
  MMSV_OK = 0,
  MMSV_INVALID_ARGUMENT = 1,
  MMSV_UNKNOWN_CASE = 2,
  MMSV_INCONSISTENT_SYSTEM = 3,
  MMSV_NUMERICAL = 4, /* failure at a refinement level, message names it */
  MMSV_IO = 5,
  MMSV_INTERNAL = 6
} mmsv_status;

typedef enum mmsv_metric {
  MMSV_METRIC_TRUNCATION = 0,
  MMSV_METRIC_DISCRETIZATION = 1,
  MMSV_METRIC_TRUNCATION_DEVIATION = 2,
  MMSV_METRIC_DISCRETIZATION_DEVIATION = 3
} mmsv_metric;

typedef enum mmsv_plot_format { MMSV_PLOT_GNUPLOT = 0, MMSV_PLOT_CSV = 1 } mmsv_plot_format;

typedef struct mmsv_options mmsv_options;
typedef struct mmsv_report mmsv_report;

typedef struct mmsv_level {
  size_t level; /* N for 1D, m for EFIE */
  double h;
  size_t n;
  double tau_inf;
  double eh_inf;
  double tau_dev_inf; /* NaN when not reported */
  double eh_dev_inf;  /* NaN when not reported */
  size_t rank;
  double residual;
} mmsv_level;

MMSV_API const char* mmsv_version(void);
MMSV_API const char* mmsv_status_string(mmsv_status status);
MMSV_API const char* mmsv_last_error(void);

/* Case catalog */
MMSV_API size_t mmsv_catalog_size(void);
MMSV_API const char* mmsv_catalog_id(size_t index);                 /* NULL if out of range */
MMSV_API const char* mmsv_catalog_description(size_t index);        /* NULL if out of range */

/* Run options; unset values keep the catalog defaults. */
MMSV_API mmsv_status mmsv_options_create(mmsv_options** out);
MMSV_API void mmsv_options_destroy(mmsv_options* options);
MMSV_API mmsv_status mmsv_options_set_levels(mmsv_options* options, const size_t* levels, size_t count);
MMSV_API mmsv_status mmsv_options_set_delta0(mmsv_options* options, double delta0);
MMSV_API mmsv_status mmsv_options_set_rate(mmsv_options* options, double r);
MMSV_API mmsv_status mmsv_options_set_rank_tolerance(mmsv_options* options, double tol);
MMSV_API mmsv_status mmsv_options_set_margin(mmsv_options* options, double margin);
MMSV_API mmsv_status mmsv_options_set_quad_degree(mmsv_options* options, int degree);
/* none | fixed:i,j | spatial-col:i | spatial:both, indices 1-based */
MMSV_API mmsv_status mmsv_options_set_injection(mmsv_options* options, const char* text);
/* JSON object with any of: levels, delta0, rate_r, rank_tol, margin,
 * quad_degree, inject. Values already set are overwritten. */
MMSV_API mmsv_status mmsv_options_load_config(mmsv_options* options, const char* path);

/* options may be NULL. */
MMSV_API mmsv_status mmsv_run_case(const char* case_id, const mmsv_options* options, mmsv_report** out);

MMSV_API void mmsv_report_destroy(mmsv_report* report);
MMSV_API size_t mmsv_report_level_count(const mmsv_report* report);
MMSV_API mmsv_status mmsv_report_level(const mmsv_report* report, size_t index, mmsv_level* out);
/* order is NaN when at_floor is set or the metric is not reported. */
MMSV_API mmsv_status mmsv_report_order(const mmsv_report* report, mmsv_metric metric, double* order,
                                       int* at_floor);
MMSV_API mmsv_status mmsv_report_predicted(const mmsv_report* report, mmsv_metric metric, double* order);
/* Truncation and discretization only. */
MMSV_API mmsv_status mmsv_report_detected(const mmsv_report* report, mmsv_metric metric, int* detected);
MMSV_API int mmsv_report_matches_prediction(const mmsv_report* report);
MMSV_API mmsv_status mmsv_report_write(const mmsv_report* report, const char* out_dir, mmsv_plot_format format);
/* Writes the JSON report including the terminating NUL if it fits; *required
 * receives the needed capacity. buffer may be NULL when capacity is 0. */
MMSV_API mmsv_status mmsv_report_json(const mmsv_report* report, char* buffer, size_t capacity,
                                      size_t* required);
/* One summary line for the report; same buffer convention as mmsv_report_json. */
MMSV_API mmsv_status mmsv_report_summary(const mmsv_report* report, int with_header, char* buffer,
                                         size_t capacity, size_t* required);

/* Minimal-change solution of the n x n system a u = b (a row-major). */
MMSV_API mmsv_status mmsv_minimal_change_solve(size_t n, const double* a, const double* b,
                                               const double* u_nominal, double tol, double* u_h,
                                               size_t* rank, double* residual);

/* Writes the structured EFIE mesh at refinement m as text. */
MMSV_API mmsv_status mmsv_export_mesh(int m, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* MMSV_MMSV_H */
