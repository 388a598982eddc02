/*
 * C interface to the block-sparse recovery library.
 *
 * Objects are opaque handles obtained from the create, generate or load
 * functions and released with the matching free function. Every fallible call
 * returns a bbhta_status; on failure bbhta_last_error() describes the most
 * recent error raised on the calling thread. Handles may be used from
 * several threads as long as each handle is not freed concurrently.
 */
#ifndef BBHTA_BBHTA_H
#define BBHTA_BBHTA_H

#include <stddef.h>
#include <stdint.h>

#if defined(BBHTA_BUILDING_LIBRARY)
#define BBHTA_API __attribute__((visibility("default")))
#else
#define BBHTA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bbhta_status {
  BBHTA_OK = 0,
  BBHTA_ERR_INVALID_ARGUMENT = 1,
  BBHTA_ERR_NUMERICAL = 2,
  BBHTA_ERR_IO = 3,
  BBHTA_ERR_INTERNAL = 4
} bbhta_status;

typedef enum bbhta_variant {
  BBHTA_VARIANT_DERIVED = 0,
  /* Printed threshold form with the ">" end rule, kept for comparison. */
  BBHTA_VARIANT_PRINTED = 1
} bbhta_variant;

typedef enum bbhta_solver_kind {
  BBHTA_SOLVER_BLOCK_BHTA = 0,
  BBHTA_SOLVER_BPA_IID = 1,
  /* LMMSE on the generator's true support; requires a generated instance. */
  BBHTA_SOLVER_ORACLE_LMMSE = 2
} bbhta_solver_kind;

typedef struct bbhta_solver_config {
  int k_max;
  double epsilon;
  double p_init;
  double p01_init;
  bbhta_variant variant;
  int learn_params;
} bbhta_solver_config;

typedef struct bbhta_gen_params {
  size_t n;
  size_t m;
  double p;
  double p01;
  double sigma_theta;
  double snr_db;
  uint64_t seed;
  uint64_t trial_index;
} bbhta_gen_params;

typedef struct bbhta_result_info {
  int iterations;
  double final_difference;
  size_t support_size;
  /* Learned hyperparameters after the last iteration. */
  double sigma_n;
  double sigma_theta;
  double p;
  double p10;
  double p01;
  size_t warning_count;
} bbhta_result_info;

typedef struct bbhta_bench_options {
  const char* manifest_path;
  const char* out_dir;
  unsigned workers;
  /* <= 0 keeps the manifest value. */
  int trials_override;
  /* < 0 keeps the manifest value, otherwise a bbhta_variant. */
  int variant_override;
  int has_seed_override;
  uint64_t seed_override;
} bbhta_bench_options;

typedef struct bbhta_summary_row {
  const char* experiment; /* owned by the summary handle */
  const char* solver;     /* owned by the summary handle */
  double grid_value;
  size_t trials;
  double mean_nmse_db;
  double stderr_nmse_db;
  double mean_iterations;
  double mean_support_f1;
  size_t failures;
  size_t exact_recoveries;
} bbhta_summary_row;

typedef struct bbhta_instance bbhta_instance;
typedef struct bbhta_result bbhta_result;
typedef struct bbhta_summary bbhta_summary;

BBHTA_API const char* bbhta_version(void);
BBHTA_API const char* bbhta_last_error(void);
BBHTA_API const char* bbhta_status_string(bbhta_status status);

BBHTA_API void bbhta_solver_config_default(bbhta_solver_config* config);
BBHTA_API void bbhta_gen_params_default(bbhta_gen_params* params);

/* Instances ------------------------------------------------------------ */

BBHTA_API bbhta_status bbhta_instance_generate(const bbhta_gen_params* params, bbhta_instance** out);
/* phi is N x M in column-major order. */
BBHTA_API bbhta_status bbhta_instance_create(size_t n, size_t m, const double* phi, const double* y,
                                             bbhta_instance** out);
BBHTA_API bbhta_status bbhta_instance_load(const char* dir, bbhta_instance** out);
BBHTA_API bbhta_status bbhta_instance_save(const bbhta_instance* instance, const char* dir);
BBHTA_API void bbhta_instance_free(bbhta_instance* instance);
BBHTA_API bbhta_status bbhta_instance_dims(const bbhta_instance* instance, size_t* n, size_t* m);
/* 1 when the instance carries the generating signal, 0 otherwise. */
BBHTA_API int bbhta_instance_has_truth(const bbhta_instance* instance);
BBHTA_API bbhta_status bbhta_instance_copy_truth(const bbhta_instance* instance, double* w, size_t len);

/* Solving -------------------------------------------------------------- */

BBHTA_API bbhta_status bbhta_solve(const bbhta_instance* instance, bbhta_solver_kind kind,
                                   const bbhta_solver_config* config, bbhta_result** out);
BBHTA_API void bbhta_result_free(bbhta_result* result);
BBHTA_API bbhta_status bbhta_result_info_get(const bbhta_result* result, bbhta_result_info* info);
BBHTA_API bbhta_status bbhta_result_copy_signal(const bbhta_result* result, double* w, size_t len);
BBHTA_API bbhta_status bbhta_result_copy_support(const bbhta_result* result, unsigned char* s, size_t len);
/* Borrowed string valid until the result is freed. */
BBHTA_API const char* bbhta_result_warning(const bbhta_result* result, size_t index);
/* NMSE in dB against the instance's generating signal. */
BBHTA_API bbhta_status bbhta_result_nmse_db(const bbhta_result* result, const bbhta_instance* instance,
                                            double* nmse_db);
/* Writes w_hat.txt and s_hat.txt into dir. */
BBHTA_API bbhta_status bbhta_result_save(const bbhta_result* result, const char* dir);

/* Benchmarks ----------------------------------------------------------- */

/* Runs a manifest and writes records.csv, summary.csv and one SVG per
   experiment into options->out_dir. */
BBHTA_API bbhta_status bbhta_bench_run(const bbhta_bench_options* options, bbhta_summary** out);
/* Re-aggregates an existing records.csv into out_dir. */
BBHTA_API bbhta_status bbhta_report(const char* records_csv, const char* out_dir, const char* x_label,
                                    bbhta_summary** out);
BBHTA_API void bbhta_summary_free(bbhta_summary* summary);
BBHTA_API size_t bbhta_summary_row_count(const bbhta_summary* summary);
BBHTA_API bbhta_status bbhta_summary_row_get(const bbhta_summary* summary, size_t index, bbhta_summary_row* row);
/* Generator redraws and failed solver runs seen by bbhta_bench_run. */
BBHTA_API int bbhta_summary_resampled_signals(const bbhta_summary* summary);
BBHTA_API size_t bbhta_summary_failure_count(const bbhta_summary* summary);
BBHTA_API const char* bbhta_summary_failure(const bbhta_summary* summary, size_t index);

#ifdef __cplusplus
}
#endif

#endif /* BBHTA_BBHTA_H */
