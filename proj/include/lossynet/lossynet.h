/* C interface to the lossynet library.
 *
 * Objects are opaque handles returned by the create, load and execute calls
 * and released with the matching *_free. Every call returns a status code;
 * on failure lossynet_last_error() describes the problem (thread-local, valid
 * until the next failing call on the same thread).
 *
 * Functions returning text take (buf, cap, needed): the text plus a NUL is
 * copied when cap is large enough, and *needed always receives the length
 * without the NUL. Passing buf = NULL, cap = 0 queries the length.
 */
#ifndef LOSSYNET_H
#define LOSSYNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(LOSSYNET_BUILDING_LIBRARY)
#define LOSSYNET_API __attribute__((visibility("default")))
#else
#define LOSSYNET_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lossynet_status {
  LOSSYNET_OK = 0,
  LOSSYNET_USAGE = 1,    /* null pointer or invalid argument combination */
  LOSSYNET_CONFIG = 2,   /* config text could not be parsed or validated */
  LOSSYNET_NUMERIC = 3,  /* numerical failure or quantity does not exist */
  LOSSYNET_DOMAIN = 4,   /* parameter outside its domain */
  LOSSYNET_IO = 5,
  LOSSYNET_CONTRACT = 6, /* structural precondition violated */
  LOSSYNET_INTERNAL = 7
} lossynet_status;

typedef struct lossynet_graph lossynet_graph;
typedef struct lossynet_config lossynet_config;
typedef struct lossynet_run lossynet_run;
typedef struct lossynet_text lossynet_text;

LOSSYNET_API const char* lossynet_version(void);
LOSSYNET_API const char* lossynet_last_error(void);
LOSSYNET_API const char* lossynet_status_name(lossynet_status status);

/* ---- text handles ---- */

LOSSYNET_API const char* lossynet_text_data(const lossynet_text* text);
LOSSYNET_API size_t lossynet_text_size(const lossynet_text* text);
LOSSYNET_API void lossynet_text_free(lossynet_text* text);

/* ---- graphs ---- */

typedef enum lossynet_model {
  LOSSYNET_MODEL_ERDOS_RENYI = 0,
  LOSSYNET_MODEL_SMALL_WORLD = 1,
  LOSSYNET_MODEL_SCALE_FREE = 2,
  LOSSYNET_MODEL_SQUARE_GRID = 3
} lossynet_model;

typedef struct lossynet_model_params {
  lossynet_model model;
  size_t nodes;
  double link_probability;     /* ER */
  size_t ring_neighbors;       /* SW */
  double shortcut_probability; /* SW */
  double degree_exponent;      /* SF */
  size_t min_degree;           /* SF */
  size_t rows, cols;           /* grid */
  uint64_t seed;
} lossynet_model_params;

typedef struct lossynet_graph_info {
  size_t nodes;
  size_t edges;
  size_t components;
  int connected;
  double mean_degree;
} lossynet_graph_info;

/* Fills defaults: ER, ring_neighbors 1, degree_exponent 3, min_degree 1. */
LOSSYNET_API void lossynet_model_params_init(lossynet_model_params* params);
/* Accepts er, sw, sf, grid and the long names. */
LOSSYNET_API lossynet_status lossynet_model_parse(const char* name, lossynet_model* out);

LOSSYNET_API lossynet_status lossynet_graph_generate(const lossynet_model_params* params,
                                                     lossynet_graph** out);
LOSSYNET_API lossynet_status lossynet_graph_load(const char* path, lossynet_graph** out);
LOSSYNET_API lossynet_status lossynet_graph_save(const lossynet_graph* graph, const char* path);
LOSSYNET_API lossynet_status lossynet_graph_assign_weights(lossynet_graph* graph, double low,
                                                           double high, uint64_t seed);
LOSSYNET_API lossynet_status lossynet_graph_info_get(const lossynet_graph* graph,
                                                     lossynet_graph_info* out);
/* Ascending weighted-Laplacian eigenvalues; `values` may be NULL to query. */
LOSSYNET_API lossynet_status lossynet_graph_eigenvalues(const lossynet_graph* graph,
                                                        double* values, size_t cap,
                                                        size_t* needed);
/* lambda2, lambda_n and lambda2 / lambda_n^2; DOMAIN for disconnected graphs. */
LOSSYNET_API lossynet_status lossynet_graph_spectral_bounds(const lossynet_graph* graph,
                                                            double* lambda2, double* lambda_n,
                                                            double* ratio);
LOSSYNET_API void lossynet_graph_free(lossynet_graph* graph);

/* ---- percolation ---- */

typedef struct lossynet_threshold {
  double p_c;
  double uncertainty;
  int monte_carlo;
  int clamped;
  int divergent;
} lossynet_threshold;

typedef struct lossynet_mc_options {
  size_t trials;
  double grid_step;
  uint64_t seed;
  unsigned threads;
  int full_connectivity; /* 0: largest component >= n/2; 1: all nodes */
} lossynet_mc_options;

LOSSYNET_API void lossynet_mc_options_init(lossynet_mc_options* options);
LOSSYNET_API const char* lossynet_percolation_csv_header(void);

/* Table thresholds. A scale-free exponent <= 3 fills p_c = 0 with
 * divergent = 1 and returns NUMERIC. `csv` receives one row without newline. */
LOSSYNET_API lossynet_status lossynet_percolation_analytic(const lossynet_model_params* params,
                                                           lossynet_threshold* out, char* csv,
                                                           size_t cap, size_t* needed);
LOSSYNET_API lossynet_status lossynet_percolation_mean_degree(double mean_degree,
                                                              lossynet_threshold* out, char* csv,
                                                              size_t cap, size_t* needed);
/* Monte-Carlo estimate. `curve`, when not NULL, receives a CSV text handle
 * "removal_probability,connected_fraction". */
LOSSYNET_API lossynet_status lossynet_percolation_mc(const lossynet_model_params* params,
                                                     const lossynet_mc_options* options,
                                                     lossynet_threshold* out, char* csv,
                                                     size_t cap, size_t* needed,
                                                     lossynet_text** curve);

LOSSYNET_API lossynet_status lossynet_drop_to_removal_rate(double p_d, double* p_l);
LOSSYNET_API lossynet_status lossynet_admissible_drop_range(double p_c, double* lower,
                                                            double* upper);
/* Minimal B with (2 p_d - p_d^2)^(B+1) < p_c. NUMERIC for p_d = 1. */
LOSSYNET_API lossynet_status lossynet_min_window(double p_d, double p_c, uint64_t* out);
/* Minimal B with p_l^(B+1) < p_c. */
LOSSYNET_API lossynet_status lossynet_min_window_for_removal(double p_l, double p_c,
                                                             uint64_t* out);
/* Window for the largest rate in an `i j p` file; max_rate may be NULL. */
LOSSYNET_API lossynet_status lossynet_conservative_window_file(const char* path, double p_c,
                                                               uint64_t* out, double* max_rate);

/* ---- experiment configs ---- */

LOSSYNET_API lossynet_status lossynet_config_default(lossynet_config** out);
LOSSYNET_API lossynet_status lossynet_config_parse(const char* text, lossynet_config** out);
LOSSYNET_API lossynet_status lossynet_config_load(const char* path, lossynet_config** out);
/* The built-in 20-node replication recipe. */
LOSSYNET_API lossynet_status lossynet_config_replication(lossynet_config** out);
LOSSYNET_API lossynet_status lossynet_config_set(lossynet_config* config, const char* key,
                                                 const char* value);
LOSSYNET_API lossynet_status lossynet_config_echo(const lossynet_config* config, char* buf,
                                                  size_t cap, size_t* needed);
/* Output directory from the config, "" when unset. */
LOSSYNET_API lossynet_status lossynet_config_output_dir(const lossynet_config* config, char* buf,
                                                        size_t cap, size_t* needed);
LOSSYNET_API void lossynet_config_free(lossynet_config* config);

/* ---- runs ---- */

typedef struct lossynet_run_summary {
  uint64_t iterations;
  int termination; /* 0 max_iters, 1 dispersion, 2 diverged */
  double eta;
  double step_bound; /* NaN when unavailable */
  double final_residual;
  double oracle_gap;
  double max_feasibility_violation;
  size_t feasibility_failures;
  int audited;
  size_t sliding_connected, sliding_total;
  size_t disjoint_connected, disjoint_total;
} lossynet_run_summary;

LOSSYNET_API lossynet_status lossynet_run_execute(const lossynet_config* config,
                                                  lossynet_run** out);
LOSSYNET_API lossynet_status lossynet_run_summary_get(const lossynet_run* run,
                                                      lossynet_run_summary* out);
/* key=value summary followed by the config echo. */
LOSSYNET_API lossynet_status lossynet_run_summary_text(const lossynet_run* run,
                                                       lossynet_text** out);
LOSSYNET_API lossynet_status lossynet_run_trace_csv(const lossynet_run* run, lossynet_text** out);
/* Trace, sidecar, summary and (if configured) states into `dir`. */
LOSSYNET_API lossynet_status lossynet_run_write(const lossynet_run* run, const char* dir);
LOSSYNET_API void lossynet_run_free(lossynet_run* run);

/* Cartesian sweep; each `vary` entry is "section.key=v1,v2,...". */
LOSSYNET_API lossynet_status lossynet_sweep(const lossynet_config* config,
                                            const char* const* vary, size_t vary_count,
                                            unsigned threads, lossynet_text** csv);

/* Runs the replication recipe into `dir`; max_iters 0 keeps the recipe's.
 * `report`, when not NULL, receives a short text summary. */
LOSSYNET_API lossynet_status lossynet_replicate(const char* dir, uint64_t max_iters,
                                                lossynet_text** report);

#ifdef __cplusplus
}
#endif

#endif /* LOSSYNET_H */
