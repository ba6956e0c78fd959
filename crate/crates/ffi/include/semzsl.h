#ifndef SEMZSL_H
#define SEMZSL_H

/* Generated by cbindgen from the semzsl-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Optimizer selector for [`SemzslHyperparams`].
 */
typedef enum SemzslOptimizer {
  SemzslOptimizer_Sgd = 0,
  /**
   * Momentum 0.9.
   */
  SemzslOptimizer_SgdMomentum = 1,
  /**
   * Adam(0.9, 0.999, 1e-8).
   */
  SemzslOptimizer_Adam = 2,
} SemzslOptimizer;

/**
 * Status code for every fallible call.
 */
typedef enum SemzslStatus {
  SemzslStatus_Ok = 0,
  SemzslStatus_NullPointer = 1,
  SemzslStatus_InvalidArgument = 2,
  SemzslStatus_DimensionMismatch = 3,
  SemzslStatus_ParseError = 4,
  SemzslStatus_IoError = 5,
  SemzslStatus_SingularSystem = 6,
  SemzslStatus_NonFinite = 7,
  SemzslStatus_Internal = 8,
} SemzslStatus;

/**
 * Opaque dataset handle.
 */
typedef struct SemzslDataset SemzslDataset;

/**
 * Opaque trained-model handle.
 */
typedef struct SemzslModel SemzslModel;

/**
 * Training hyperparameters, plain-old-data mirror of the library's.
 */
typedef struct SemzslHyperparams {
  double lambda;
  double beta;
  double alpha;
  double lr;
  uint64_t epochs;
  uint64_t batch_size;
  uint64_t seed;
  enum SemzslOptimizer optimizer;
} SemzslHyperparams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *semzsl_version(void);

/**
 * Message for the most recent failure on this thread; valid until the next
 * failing call on the same thread. Do not free.
 */
const char *semzsl_last_error_message(void);

/**
 * Release a string returned through an out-pointer.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library through a
 * string out-parameter, not yet freed. A null pointer is ignored.
 */
void semzsl_string_free(char *s);

/**
 * Default hyperparameters (Adam, lr 1e-3, 100 epochs, batch 64, lambda
 * 1e-4, beta 1, alpha 1, seed 0).
 */
struct SemzslHyperparams semzsl_hyperparams_default(void);

/**
 * Generate a seeded synthetic dataset.
 *
 * # Safety
 * `out` must be a valid pointer to a `SemzslDataset*`.
 */
enum SemzslStatus semzsl_dataset_synthetic(uint64_t d_f,
                                           uint64_t d_a,
                                           uint64_t seen_classes,
                                           uint64_t unseen_classes,
                                           uint64_t per_class,
                                           double noise_sigma,
                                           uint64_t seed,
                                           struct SemzslDataset **out);

/**
 * Load a dataset from a manifest file.
 *
 * # Safety
 * `manifest_path` must be a NUL-terminated string; `out` must be a valid
 * pointer to a `SemzslDataset*`.
 */
enum SemzslStatus semzsl_dataset_load(const char *manifest_path, struct SemzslDataset **out);

/**
 * Basic shape information for a dataset handle. Any out-pointer may be null
 * to skip that field.
 *
 * # Safety
 * `dataset` must be a live handle from this library.
 */
enum SemzslStatus semzsl_dataset_shape(const struct SemzslDataset *dataset,
                                       uint64_t *train_rows,
                                       uint64_t *test_rows,
                                       uint64_t *feature_dim,
                                       uint64_t *descriptor_dim,
                                       uint64_t *seen_classes,
                                       uint64_t *unseen_classes);

/**
 * Release a dataset handle.
 *
 * # Safety
 * `dataset` must come from this library and not be freed twice. Null is
 * ignored.
 */
void semzsl_dataset_free(struct SemzslDataset *dataset);

/**
 * Train a model on the dataset's seen split. Pass null hyperparameters for
 * the defaults.
 *
 * # Safety
 * `dataset` must be a live handle; `out` must be a valid pointer to a
 * `SemzslModel*`; `hyperparams` may be null.
 */
enum SemzslStatus semzsl_train(const struct SemzslDataset *dataset,
                               const struct SemzslHyperparams *hyperparams,
                               struct SemzslModel **out);

/**
 * Load a model checkpoint manifest.
 *
 * # Safety
 * `manifest_path` must be a NUL-terminated string; `out` must be a valid
 * pointer to a `SemzslModel*`.
 */
enum SemzslStatus semzsl_model_load(const char *manifest_path, struct SemzslModel **out);

/**
 * Save a model checkpoint (v.bin, b.csv, model.txt) into a directory.
 *
 * # Safety
 * `model` must be a live handle; `dir` must be a NUL-terminated string.
 */
enum SemzslStatus semzsl_model_save(const struct SemzslModel *model, const char *dir);

/**
 * Release a model handle.
 *
 * # Safety
 * `model` must come from this library and not be freed twice. Null is
 * ignored.
 */
void semzsl_model_free(struct SemzslModel *model);

/**
 * Evaluate a model on a dataset's unseen test split and return the full
 * report (accuracy, mAP, PR curves, confusion) as a JSON string.
 *
 * # Safety
 * `model` and `dataset` must be live handles; `out_json` must be a valid
 * pointer to a `char*` and the result must be freed with
 * [`semzsl_string_free`].
 */
enum SemzslStatus semzsl_evaluate_json(const struct SemzslModel *model,
                                       const struct SemzslDataset *dataset,
                                       bool use_cosine,
                                       char **out_json);

/**
 * Compare the analytic gradient with central finite differences on a
 * seeded random instance; writes the max relative error.
 *
 * # Safety
 * `out_max_rel_err` must be a valid pointer to an `f64`.
 */
enum SemzslStatus semzsl_grad_check(uint64_t seed, double step, double *out_max_rel_err);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMZSL_H */
