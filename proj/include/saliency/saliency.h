/* Copyright 2026 The Saliency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/*
 * C interface to the saliency library.
 *
 * Every fallible call returns a sal_status. On failure, sal_last_error()
 * returns a message describing the most recent error on the calling thread.
 * Objects are opaque handles created by the create, load and run functions and
 * released with the matching free function; free functions accept NULL.
 * Buffers are caller-owned. Calls that fill an array take its capacity and
 * report the required length through an out parameter; a capacity that is
 * too small yields SAL_ERR_INVALID_ARGUMENT without writing.
 */

#ifndef SALIENCY_SALIENCY_H_
#define SALIENCY_SALIENCY_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SALIENCY_BUILDING_LIBRARY)
#define SAL_API __attribute__((visibility("default")))
#else
#define SAL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sal_status {
  SAL_OK = 0,
  SAL_ERR_INVALID_ARGUMENT = 1,
  SAL_ERR_DIMENSION = 2,
  SAL_ERR_NUMERICAL = 3,
  SAL_ERR_PARSE = 4,
  SAL_ERR_IO = 5,
  SAL_ERR_BUDGET = 6,
  SAL_ERR_INTERNAL = 7
} sal_status;

typedef enum sal_activation {
  SAL_RELU = 0,
  SAL_SIGMOID = 1,
  SAL_IDENTITY = 2
} sal_activation;

typedef enum sal_method {
  SAL_METHOD_GRAD = 0,
  SAL_METHOD_SMOOTHGRAD = 1,
  SAL_METHOD_INTEGRATED_GRADIENTS = 2,
  SAL_METHOD_CAFO = 3,
  SAL_METHOD_CASO = 4,
  SAL_METHOD_SMOOTH_CAFO = 5,
  SAL_METHOD_SMOOTH_CASO = 6
} sal_method;

typedef enum sal_target {
  SAL_TARGET_PREDICTED = 0,
  SAL_TARGET_LABEL = 1
} sal_target;

typedef struct sal_model sal_model;
typedef struct sal_dataset sal_dataset;
typedef struct sal_result sal_result;
typedef struct sal_sweep sal_sweep;

SAL_API const char* sal_version(void);
SAL_API const char* sal_last_error(void);
SAL_API const char* sal_status_name(sal_status status);

/* ---- models ------------------------------------------------------------ */

/* dims has n_layers + 1 entries (input dim, then each layer's output dim). */
SAL_API sal_status sal_model_create(const size_t* dims,
                                    const sal_activation* activations,
                                    size_t n_layers, uint64_t seed,
                                    sal_model** out);
SAL_API sal_status sal_model_load(const char* path, sal_model** out);
SAL_API sal_status sal_model_save(const sal_model* model, const char* path);
/* JSON text of the model; `provenance_json` (may be NULL) is embedded under
 * the "provenance" key. */
SAL_API sal_status sal_model_save_with_provenance(const sal_model* model,
                                                  const char* path,
                                                  const char* provenance_json);
SAL_API void sal_model_free(sal_model* model);
SAL_API size_t sal_model_input_dim(const sal_model* model);
SAL_API size_t sal_model_num_classes(const sal_model* model);
SAL_API int sal_model_is_piecewise_linear(const sal_model* model);
SAL_API sal_status sal_model_predict(const sal_model* model, const double* x,
                                     size_t dim, double* probabilities,
                                     size_t classes, int* predicted);

/* ---- datasets ---------------------------------------------------------- */

typedef struct sal_blob_config {
  size_t dim;
  int classes;
  size_t samples;
  double spread;
  uint64_t seed;
} sal_blob_config;

SAL_API sal_status sal_dataset_load_csv(const char* path, sal_dataset** out);
SAL_API sal_status sal_dataset_load_raw(const char* tensor_path,
                                        const char* label_path,
                                        sal_dataset** out);
SAL_API sal_status sal_dataset_make_blobs(const sal_blob_config* config,
                                          sal_dataset** out);
/* Splits off the last `holdout` samples into `tail`; `head` keeps the rest. */
SAL_API sal_status sal_dataset_split(const sal_dataset* data, size_t holdout,
                                     sal_dataset** head, sal_dataset** tail);
SAL_API sal_status sal_dataset_save_csv(const sal_dataset* data,
                                        const char* path);
SAL_API sal_status sal_dataset_save_raw(const sal_dataset* data,
                                        const char* tensor_path,
                                        const char* label_path);
SAL_API void sal_dataset_free(sal_dataset* data);
SAL_API size_t sal_dataset_size(const sal_dataset* data);
SAL_API size_t sal_dataset_dim(const sal_dataset* data);
SAL_API sal_status sal_dataset_sample(const sal_dataset* data, size_t index,
                                      double* x, size_t dim, int* label);

/* ---- training ---------------------------------------------------------- */

typedef struct sal_train_config {
  double learning_rate;
  int epochs;
  uint64_t seed;
} sal_train_config;

/* Replaces the model parameters with the trained ones. */
SAL_API sal_status sal_train(sal_model* model, const sal_dataset* data,
                             const sal_train_config* config,
                             double* train_accuracy, double* final_loss);
SAL_API sal_status sal_accuracy(const sal_model* model, const sal_dataset* data,
                                double* accuracy);

/* ---- interpretation ---------------------------------------------------- */

typedef struct sal_method_params {
  sal_method method;
  double lambda1;
  double c1;
  int smoothing_samples;
  double smoothing_sigma;
  int ig_steps;
  const double* baseline; /* NULL for zero; otherwise input_dim entries */
  uint64_t seed;
  int power_iterations;
  double power_tolerance;
  double learning_rate;
  int solver_iterations;
  double backtrack_decay;
  int max_backtracks;
  size_t channels_per_pixel;
  sal_target target;
} sal_method_params;

/* Defaults: lambda1 0, c1 10, 50 samples at sigma 0.15, 50 IG steps,
 * 10 power iterations (tol 1e-6), learning rate 0.1, 10 solver iterations,
 * decay 0.5, 20 backtracks, 1 channel, predicted-class target, seed 0. */
SAL_API void sal_method_params_default(sal_method_params* params);
SAL_API sal_status sal_method_from_name(const char* name, sal_method* out);
SAL_API const char* sal_method_name(sal_method method);

typedef struct sal_result_info {
  sal_method method;
  double sparsity;
  double loss_gain;
  double raw_loss_gain;
  double lambda1;
  double lambda2;
  double curvature_bound;
  double confidence;
  int predicted;
  int target;
  int iterations;
  int kink_warning;
  int solver_flag;
} sal_result_info;

SAL_API sal_status sal_interpret(const sal_model* model, const double* x,
                                 size_t dim, int label,
                                 const sal_method_params* params,
                                 sal_result** out);
SAL_API void sal_result_free(sal_result* result);
SAL_API size_t sal_result_dim(const sal_result* result);
SAL_API sal_status sal_result_attribution(const sal_result* result,
                                          double* out, size_t dim);
SAL_API sal_status sal_result_info_get(const sal_result* result,
                                       sal_result_info* info);
/* Solver trace: one entry per iteration. */
SAL_API size_t sal_result_trace_length(const sal_result* result);
SAL_API sal_status sal_result_trace(const sal_result* result, size_t iteration,
                                    double* objective, double* step_size,
                                    size_t* nnz);

typedef struct sal_sweep_config {
  const double* grid; /* NULL selects the default grid */
  size_t grid_length;
  double eta_low;
  double eta_high;
  int max_refinements;
  int jobs;
} sal_sweep_config;

SAL_API void sal_sweep_config_default(sal_sweep_config* config);
SAL_API size_t sal_default_grid(double* out, size_t capacity);
SAL_API sal_status sal_sweep_run(const sal_model* model, const double* x,
                                 size_t dim, int label,
                                 const sal_method_params* params,
                                 const sal_sweep_config* config,
                                 sal_sweep** out);
SAL_API void sal_sweep_free(sal_sweep* sweep);
SAL_API size_t sal_sweep_count(const sal_sweep* sweep);
/* Borrowed pointer, valid until the sweep is freed. */
SAL_API const sal_result* sal_sweep_candidate(const sal_sweep* sweep,
                                              size_t index);
/* *found is 0 when no candidate was selected; *target_reached reports
 * whether the selection lies in the requested sparsity range. */
SAL_API sal_status sal_sweep_selected(const sal_sweep* sweep, size_t* index,
                                      int* found, int* target_reached);
SAL_API size_t sal_sweep_refinements(const sal_sweep* sweep, double* out,
                                     size_t capacity);

SAL_API double sal_sparsity_ratio(const double* delta, size_t dim,
                                  size_t channels_per_pixel);

/* Nonzero spectrum of the input Hessian at x (relu networks only).
 * eigenvectors, when non-NULL, receives dim * count values, one eigenvector
 * after another. */
SAL_API sal_status sal_hessian_spectrum(const sal_model* model, const double* x,
                                        size_t dim, double* eigenvalues,
                                        double* eigenvectors, size_t capacity,
                                        size_t* count);

/* ---- display ----------------------------------------------------------- */

SAL_API sal_status sal_normalize_display(const double* delta, size_t dim,
                                         size_t width, size_t height,
                                         size_t channels, double* out);
/* comment may be NULL; it is written as a header comment line. */
SAL_API sal_status sal_write_pgm(const double* map, size_t width,
                                 size_t height, const char* comment,
                                 const char* path);
SAL_API sal_status sal_write_raw_f64(const char* path, size_t count, size_t dim,
                                     const double* data);

/* ---- analysis ---------------------------------------------------------- */

typedef enum sal_rank_one_mode {
  SAL_VARY_CLASSES = 0,
  SAL_VARY_EPS = 1,
  SAL_GRID = 2
} sal_rank_one_mode;

typedef struct sal_rank_one_config {
  sal_rank_one_mode mode;
  double p0;
  const size_t* classes;
  size_t n_classes;
  const double* eps;
  size_t n_eps;
  size_t dim;
  uint64_t seed;
} sal_rank_one_config;

typedef struct sal_rank_one_row {
  size_t classes;
  double eps;
  double rel_error;
} sal_rank_one_row;

SAL_API sal_status sal_rank_one_sim(const sal_rank_one_config* config,
                                    sal_rank_one_row* rows, size_t capacity,
                                    size_t* n_rows);

typedef struct sal_gap_row {
  size_t sample_id;
  double confidence;
  double gap;
  int skipped;
} sal_gap_row;

/* Uses the solver and power settings of params; lambda1 is forced to 0. */
SAL_API sal_status sal_gap_study(const sal_model* model,
                                 const sal_dataset* data, size_t samples,
                                 const sal_method_params* params,
                                 sal_gap_row* rows, size_t capacity,
                                 size_t* n_rows);

typedef struct sal_alignment_row {
  size_t classes;
  double cosine;
  double mass_ratio;
  double energy_ratio;
} sal_alignment_row;

SAL_API sal_status sal_alignment_curve(size_t dim, const size_t* classes,
                                       size_t n_classes, double eps,
                                       uint64_t seed, sal_alignment_row* rows,
                                       size_t capacity, size_t* n_rows);

typedef struct sal_oracle_config {
  size_t dim;
  size_t support;
  int instances;
  double coupling;
  double c1;
  int solver_iterations;
  uint64_t seed;
} sal_oracle_config;

typedef struct sal_oracle_row {
  int instance;
  uint32_t planted_mask;
  uint32_t oracle_mask;
  uint32_t l1_mask;
  double oracle_value;
  double l1_value;
  double best_lambda1;
  int l1_match;
  int dominance;
} sal_oracle_row;

SAL_API void sal_oracle_config_default(sal_oracle_config* config);
SAL_API sal_status sal_oracle_check(const sal_oracle_config* config,
                                    sal_oracle_row* rows, size_t capacity,
                                    size_t* n_rows);

SAL_API sal_status sal_spearman(const double* a, const double* b, size_t n,
                                double* rho);

#ifdef __cplusplus
}
#endif

#endif /* SALIENCY_SALIENCY_H_ */
