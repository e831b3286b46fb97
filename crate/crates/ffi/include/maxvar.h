#ifndef MAXVAR_H
#define MAXVAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MaxvarOperator {
  MAXVAR_OPERATOR_CENTERED = 0,
  MAXVAR_OPERATOR_NON_CENTERED = 1,
} MaxvarOperator;

typedef enum MaxvarStatus {
  MAXVAR_STATUS_OK = 0,
  MAXVAR_STATUS_NULL_POINTER = 1,
  MAXVAR_STATUS_INVALID_UTF8 = 2,
  MAXVAR_STATUS_PARSE_ERROR = 3,
  MAXVAR_STATUS_INVALID_ARGUMENT = 4,
  MAXVAR_STATUS_COMPUTATION_ERROR = 5,
  MAXVAR_STATUS_PANIC = 6,
} MaxvarStatus;

/**
 * Opaque handle to a finitely supported non-negative sequence.
 */
typedef struct MaxvarSequence MaxvarSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses the line-oriented sequence text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MaxvarStatus maxvar_sequence_parse(const char *text, struct MaxvarSequence **out);

/**
 * Builds a sequence from `len` integer values starting at `offset`.
 *
 * # Safety
 * `values` must point to `len` readable integers (or be null with
 * `len == 0`); `out` must be a valid pointer.
 */
enum MaxvarStatus maxvar_sequence_from_ints(int64_t offset,
                                            const int64_t *values,
                                            size_t len,
                                            struct MaxvarSequence **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `seq` must come from this library and not be used afterwards.
 */
void maxvar_sequence_free(struct MaxvarSequence *seq);

/**
 * Maximal function value at `n` as an exact `p/q` string.
 *
 * # Safety
 * `seq` must be a live handle and `out` a valid pointer.
 */
enum MaxvarStatus maxvar_max_at(const struct MaxvarSequence *seq,
                                enum MaxvarOperator op,
                                int64_t n,
                                char **out);

/**
 * `{"kind", "var_f", "var_Mf", "ratio"}` with string-encoded rationals.
 *
 * # Safety
 * `seq` must be a live handle and `out` a valid pointer.
 */
enum MaxvarStatus maxvar_variation_json(const struct MaxvarSequence *seq,
                                        enum MaxvarOperator op,
                                        char **out);

/**
 * Runs the comma-separated checks (`1,2,3,4,5,thm,conj,nc`) and writes the
 * list of check records as JSON. `all_pass` receives 1 when every check
 * passed, else 0.
 *
 * # Safety
 * `seq` must be a live handle, `checks` a NUL-terminated string, and `out`
 * and `all_pass` valid pointers.
 */
enum MaxvarStatus maxvar_verify_json(const struct MaxvarSequence *seq,
                                     const char *checks,
                                     char **out,
                                     int32_t *all_pass);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void maxvar_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *maxvar_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *maxvar_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MAXVAR_H */
