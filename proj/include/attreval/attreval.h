/* Copyright 2026 The attreval Authors. All Rights Reserved.

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
 * C interface to the attreval library.
 *
 * Every fallible call returns an aeval_status. On failure a human-readable
 * message for the calling thread is available from aeval_last_error() until
 * the next failing call on that thread. Objects are opaque and owned by the
 * caller once returned; release them with the matching *_free function.
 */
#ifndef ATTREVAL_ATTREVAL_H_
#define ATTREVAL_ATTREVAL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AEVAL_API __declspec(dllexport)
#else
#define AEVAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aeval_status {
  AEVAL_OK = 0,
  AEVAL_ERR_FORMAT = 1,
  AEVAL_ERR_CORRUPTION = 2,
  AEVAL_ERR_VALIDATION = 3,
  AEVAL_ERR_IO = 4,
  AEVAL_ERR_RESOLUTION = 5,
  AEVAL_ERR_DOMAIN = 6,
  AEVAL_ERR_INSUFFICIENT_DATA = 7,
  AEVAL_ERR_DEGENERATE = 8,
  AEVAL_ERR_INVALID_ARGUMENT = 9,
  AEVAL_ERR_INTERNAL = 10
} aeval_status;

typedef struct aeval_grid aeval_grid;
typedef struct aeval_mask aeval_mask;
typedef struct aeval_options aeval_options;
typedef struct aeval_result aeval_result;

AEVAL_API const char* aeval_version(void);
AEVAL_API const char* aeval_status_string(aeval_status status);
AEVAL_API const char* aeval_last_error(void);
/* Frees strings returned through char** out-parameters. */
AEVAL_API void aeval_string_free(char* s);

/* Attribution grids (AGRD files). */
AEVAL_API aeval_status aeval_grid_create(uint32_t height, uint32_t width,
                                         const double* values, aeval_grid** out);
AEVAL_API aeval_status aeval_grid_read(const char* path, aeval_grid** out);
AEVAL_API aeval_status aeval_grid_write(const aeval_grid* grid, const char* path);
AEVAL_API aeval_status aeval_grid_dims(const aeval_grid* grid, uint32_t* height,
                                       uint32_t* width);
/* Copies height*width values into out (capacity n). */
AEVAL_API aeval_status aeval_grid_values(const aeval_grid* grid, double* out, size_t n);
AEVAL_API void aeval_grid_free(aeval_grid* grid);

/* Ground-truth masks: PGM (P5) or AGRD, positive iff intensity > threshold. */
AEVAL_API aeval_status aeval_mask_read(const char* path, int threshold, aeval_mask** out);
AEVAL_API aeval_status aeval_mask_create(uint32_t height, uint32_t width,
                                         const uint8_t* bits, aeval_mask** out);
AEVAL_API aeval_status aeval_mask_bits(const aeval_mask* mask, uint8_t* out, size_t n);
AEVAL_API void aeval_mask_free(aeval_mask* mask);

/* Metrics. */
AEVAL_API aeval_status aeval_iou(const uint8_t* pred, const uint8_t* truth, size_t n,
                                 double* out);
AEVAL_API aeval_status aeval_auc_iou(const double* taus, const double* ious, size_t n,
                                     double* out);
/* Evaluates map against mask on n_taus thresholds; ious_out has n_taus slots. */
AEVAL_API aeval_status aeval_iou_curve(const aeval_grid* map, const aeval_mask* mask,
                                       const double* taus, size_t n_taus,
                                       double* ious_out, double* auc_out);

/* Statistics. */
AEVAL_API aeval_status aeval_wilcoxon(const double* diffs, size_t n, double* w_plus,
                                      double* p_value);
AEVAL_API aeval_status aeval_holm(const double* p_values, size_t m, double alpha,
                                  double* adjusted_out, int* reject_out);

/* Study evaluation. */
AEVAL_API aeval_status aeval_options_create(aeval_options** out);
AEVAL_API void aeval_options_free(aeval_options* options);
/* spec is "lo:hi:n". */
AEVAL_API aeval_status aeval_options_set_thresholds(aeval_options* options, const char* spec);
AEVAL_API aeval_status aeval_options_set_alpha(aeval_options* options, double alpha);
AEVAL_API aeval_status aeval_options_set_strata_bounds(aeval_options* options,
                                                       double small_max, double large_min);
AEVAL_API aeval_status aeval_options_set_mask_threshold(aeval_options* options, int threshold);
AEVAL_API aeval_status aeval_options_set_workers(aeval_options* options, unsigned workers);

AEVAL_API aeval_status aeval_evaluate(const char* manifest_path, const aeval_options* options,
                                      aeval_result** out);
AEVAL_API aeval_status aeval_result_load(const char* json_path, aeval_result** out);
/* Writes report.md, study_result.json and curves.csv into out_dir. */
AEVAL_API aeval_status aeval_result_write_reports(const aeval_result* result,
                                                  const char* out_dir);
AEVAL_API aeval_status aeval_result_to_json(const aeval_result* result, char** out);
AEVAL_API aeval_status aeval_result_method_count(const aeval_result* result, size_t* out);
AEVAL_API aeval_status aeval_result_auc_mean(const aeval_result* result, const char* method_id,
                                             double* out);
/* criterion: "auc" or "iou@<tau>". Returns a Markdown table. */
AEVAL_API aeval_status aeval_result_rank(const aeval_result* result, const char* criterion,
                                         char** out);
AEVAL_API aeval_status aeval_results_compare(const aeval_result* const* results,
                                             const char* const* labels, size_t n, char** out);
AEVAL_API void aeval_result_free(aeval_result* result);

/* Synthetic studies. Writes masks, grids and manifest.json under out_dir;
 * when has_seed is nonzero, seed overrides the spec's seed. */
AEVAL_API aeval_status aeval_synth_generate(const char* spec_json_path, const char* out_dir,
                                            int has_seed, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* ATTREVAL_ATTREVAL_H_ */
