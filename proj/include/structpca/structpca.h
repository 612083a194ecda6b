/* C API for the structpca shared library.
 *
 * All functions return spca_status; SPCA_OK means success. On failure a
 * thread-local message is available via spca_last_error(). Output handles are
 * owned by the caller and released with the matching _destroy function.
 * Strings returned as char** are released with spca_string_free; strings
 * returned as const char* stay owned by their handle.
 *
 * Matrices are dense, row-major doubles. Data matrices are laid out
 * variables x samples (n x N), matching the library's internal convention;
 * the CSV readers/writers handle the on-disk transposition.
 */
#ifndef STRUCTPCA_STRUCTPCA_H
#define STRUCTPCA_STRUCTPCA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spca_status {
  SPCA_OK = 0,
  SPCA_ERR_INVALID_ARGUMENT,
  SPCA_ERR_NON_SQUARE,
  SPCA_ERR_NOT_SYMMETRIC,
  SPCA_ERR_FAILED_TO_CONVERGE,
  SPCA_ERR_EMPTY_NULL_SPACE,
  SPCA_ERR_RANK_DEFICIENT,
  SPCA_ERR_RANK_DEFICIENT_BASE,
  SPCA_ERR_SUPPORT_OUT_OF_RANGE,
  SPCA_ERR_STRUCTURE_INFEASIBLE,
  SPCA_ERR_TOO_FEW_SAMPLES,
  SPCA_ERR_DEGENERATE_COVARIANCE,
  SPCA_ERR_DEGENERATE_SIGNAL,
  SPCA_ERR_KNOWN_ROWS_RANK_DEFICIENT,
  SPCA_ERR_DIMENSION_MISMATCH,
  SPCA_ERR_SHAPE_MISMATCH,
  SPCA_ERR_RANK_DEFICIENT_ESTIMATE,
  SPCA_ERR_LENGTH_MISMATCH,
  SPCA_ERR_UNKNOWN_CASE,
  SPCA_ERR_IO,
  SPCA_ERR_PARSE,
  SPCA_ERR_INTERNAL
} spca_status;

const char* spca_status_name(spca_status status);
const char* spca_last_error(void);
const char* spca_version(void);
const char* spca_rng_algorithm(void);

/* ---- opaque handles ---- */
typedef struct spca_mat spca_mat;
typedef struct spca_mask spca_mask;
typedef struct spca_result spca_result;   /* identification result */
typedef struct spca_table spca_table;     /* Monte-Carlo results */

void spca_string_free(char* s);

/* ---- matrices ---- */
spca_status spca_mat_create(int rows, int cols, const double* row_major, spca_mat** out);
void spca_mat_destroy(spca_mat* mat);
int spca_mat_rows(const spca_mat* mat);
int spca_mat_cols(const spca_mat* mat);
spca_status spca_mat_get(const spca_mat* mat, int row, int col, double* out);
spca_status spca_mat_copy(const spca_mat* mat, double* out_row_major);
spca_status spca_mat_load_csv(const char* path, spca_mat** out);
spca_status spca_mat_save_csv(const spca_mat* mat, const char* path);
/* data layout: file is samples x variables with header v1,...,vn */
spca_status spca_data_load_csv(const char* path, spca_mat** out);
spca_status spca_data_save_csv(const spca_mat* y, const char* path);

/* ---- structure masks ---- */
spca_status spca_mask_create(int rows, int cols, const uint8_t* cells, spca_mask** out);
void spca_mask_destroy(spca_mask* mask);
int spca_mask_rows(const spca_mask* mask);
int spca_mask_cols(const spca_mask* mask);
spca_status spca_mask_load(const char* path, spca_mask** out);
spca_status spca_mask_save(const spca_mask* mask, const char* path);

/* ---- case registry ---- */
int spca_case_count(void);
const char* spca_case_name(int index);
spca_status spca_case_model(const char* name, spca_mat** out);
spca_status spca_case_mask(const char* name, spca_mask** out);

/* ---- data generation ---- */
/* snr may be INFINITY for noise-free data. y_out is n x N. */
spca_status spca_generate(const spca_mat* model, int n_samples, double snr,
                          uint64_t seed, spca_mat** y_out, double* sigma_out);

/* ---- identification ---- */
typedef struct spca_options {
  double rank_tol_rel; /* candidate acceptance threshold, (0, 1) */
  double eig_tol;      /* rank tolerance; <= 0 selects the default */
  int center_data;     /* 0 or 1 */
} spca_options;

void spca_options_init(spca_options* opts);

spca_status spca_identify_pca(const spca_mat* data, int m, const spca_options* opts,
                              spca_result** out);
spca_status spca_identify_spca(const spca_mat* data, const spca_mask* mask,
                               const spca_options* opts, spca_result** out);
spca_status spca_identify_cpca(const spca_mat* data, const spca_mat* known_rows,
                               int n_unknown, const spca_options* opts, spca_result** out);
spca_status spca_identify_cspca(const spca_mat* data, const spca_mask* mask,
                                const spca_options* opts, spca_result** out);

spca_status spca_result_model(const spca_result* result, spca_mat** out);
/* Eigenvalue stages, processing order and (for cspca) equation labels. */
const char* spca_result_diagnostics_json(const spca_result* result);
void spca_result_destroy(spca_result* result);

spca_status spca_noise_variance(const spca_mat* data, int m, double* out);

/* ---- evaluation ---- */
spca_status spca_theta(const spca_mat* true_model, const spca_mat* estimate,
                       int normalize_rows, double* theta_out);
spca_status spca_theta_report_json(const spca_mat* true_model, const spca_mat* estimate,
                                   int normalize_rows, char** json_out);

/* ---- Monte-Carlo sweeps (config documented in the project README) ---- */
spca_status spca_mc_sweep(const char* config_json, spca_table** out);
const char* spca_table_summary_csv(const spca_table* table);
const char* spca_table_long_csv(const spca_table* table);
const char* spca_table_envelope_json(const spca_table* table);
double spca_table_wall_seconds(const spca_table* table);
void spca_table_destroy(spca_table* table);

/* ---- fault detection ---- */
spca_status spca_detect(const spca_mat* a_hat, const spca_mat* y, double tolerance,
                        int use_l2_norm, char** report_json_out);
spca_status spca_fault_experiment(const char* config_json, char** json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STRUCTPCA_STRUCTPCA_H */
