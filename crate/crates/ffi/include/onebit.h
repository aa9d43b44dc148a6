#ifndef ONEBIT_H
#define ONEBIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum OnebitStatus {
  ONEBIT_STATUS_OK = 0,
  ONEBIT_STATUS_NULL_POINTER = 1,
  ONEBIT_STATUS_INVALID_ARGUMENT = 2,
  ONEBIT_STATUS_DIMENSION = 3,
  ONEBIT_STATUS_IO = 4,
  ONEBIT_STATUS_MODEL_FORMAT = 5,
  ONEBIT_STATUS_UNSUPPORTED = 6,
  ONEBIT_STATUS_RANGE = 7,
  ONEBIT_STATUS_DATA = 8,
  ONEBIT_STATUS_PANIC = 99,
} OnebitStatus;

/**
 * Opaque trained model.
 */
typedef struct OnebitModel OnebitModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or an empty string. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *onebit_last_error(void);

/**
 * Trains a model on `count` labeled points of dimension `n` (labels in
 * `1..=classes`) with `m` measurements, `layers` layers and `seed`.
 *
 * # Safety
 * `data` must point to `n * count` doubles, `labels` to `count` values and
 * `out` to writable storage for a handle.
 */
enum OnebitStatus onebit_train(const double *data,
                               size_t n,
                               size_t count,
                               const size_t *labels,
                               size_t classes,
                               size_t m,
                               size_t layers,
                               uint64_t seed,
                               struct OnebitModel **out);

/**
 * Loads a model file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum OnebitStatus onebit_model_load(const char *path, struct OnebitModel **out);

/**
 * Writes a model file.
 *
 * # Safety
 * `model` must be a live handle and `path` a NUL-terminated string.
 */
enum OnebitStatus onebit_model_save(const struct OnebitModel *model, const char *path);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void onebit_model_free(struct OnebitModel *model);

/**
 * Reports `m`, `n`, the number of classes and layers. Any output pointer may
 * be null.
 *
 * # Safety
 * `model` must be a live handle; non-null outputs must be writable.
 */
enum OnebitStatus onebit_model_dims(const struct OnebitModel *model,
                                    size_t *m,
                                    size_t *n,
                                    size_t *classes,
                                    size_t *layers);

/**
 * Classifies a raw point `x` of length `n`. Writes the 1-based label and,
 * when `scores` is non-null, the `classes` normalized scores.
 *
 * # Safety
 * `x` must hold `n` doubles, `label` be writable and `scores` null or
 * writable for `scores_len` doubles.
 */
enum OnebitStatus onebit_classify_point(const struct OnebitModel *model,
                                        const double *x,
                                        size_t n,
                                        size_t *label,
                                        double *scores,
                                        size_t scores_len);

/**
 * Classifies from one-bit measurements `q` (entries +1 or -1, length `m`).
 *
 * # Safety
 * As [`onebit_classify_point`], with `q` holding `m` bytes.
 */
enum OnebitStatus onebit_classify_code(const struct OnebitModel *model,
                                       const int8_t *q,
                                       size_t m,
                                       size_t *label,
                                       double *scores,
                                       size_t scores_len);

/**
 * Lower bound on the correct-classification probability for two equal cones
 * of width `a1_deg` separated by `a12_deg`, test point centered, `m` random
 * hyperplanes.
 *
 * # Safety
 * `out` must be writable.
 */
enum OnebitStatus onebit_theorem_bound(size_t m, double a1_deg, double a12_deg, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ONEBIT_H */
