#ifndef TORUS_STAB_H
#define TORUS_STAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_ARGUMENT = 2,
  TS_STATUS_PARSE = 3,
  TS_STATUS_INFEASIBLE = 4,
  TS_STATUS_BUFFER_TOO_SMALL = 5,
  TS_STATUS_INTERNAL = 6,
} TsStatus;

/**
 * Opaque configuration handle.
 */
typedef struct TsConfig TsConfig;

/**
 * Decision of the stability tester.
 */
typedef struct TsTestResult {
  /**
   * 1 if the configuration was accepted, 0 if rejected.
   */
  int32_t accepted;
  /**
   * Distinct cells read.
   */
  uint64_t queries;
  /**
   * 1 if the torus was too small to sample and was read in full.
   */
  int32_t fallback;
  /**
   * A cell of the witness when rejected, otherwise zero.
   */
  size_t witness_row;
  size_t witness_col;
} TsTestResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * A static description of a status code; unknown codes get a generic one.
 */
const char *ts_status_message(int32_t status);

/**
 * Creates an all-zero `m×n` configuration.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum TsStatus ts_config_new(size_t m, size_t n, struct TsConfig **out);

/**
 * Parses the text grid format: a `"m n"` header line, then `m` lines of
 * `n` characters `0`/`1`, each ending in LF.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum TsStatus ts_config_parse(const char *text, struct TsConfig **out);

/**
 * Releases a handle. Null is accepted and ignored.
 *
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void ts_config_free(struct TsConfig *h);

/**
 * # Safety
 * `h` must be a live handle; `m` and `n` must be writable.
 */
enum TsStatus ts_config_dims(const struct TsConfig *h, size_t *m, size_t *n);

/**
 * # Safety
 * `h` must be a live handle; `value` must be writable.
 */
enum TsStatus ts_config_get(const struct TsConfig *h, size_t row, size_t col, int32_t *value);

/**
 * Sets a cell to 1 if `value` is non-zero, else to 0.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum TsStatus ts_config_set(struct TsConfig *h, size_t row, size_t col, int32_t value);

/**
 * Writes the grid text, NUL-terminated, into `buf`. `needed` receives the
 * required size including the terminator, also when the buffer is too
 * small; `buf` may then be null.
 *
 * # Safety
 * `h` must be a live handle; `buf` must hold `len` bytes or be null;
 * `needed` must be writable.
 */
enum TsStatus ts_config_format(const struct TsConfig *h, char *buf, size_t len, size_t *needed);

/**
 * One synchronous step of the rule; the result is a new handle.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum TsStatus ts_step(const struct TsConfig *h, uint8_t threshold, struct TsConfig **out);

/**
 * Writes 1 if two steps of the rule return the configuration, else 0.
 *
 * # Safety
 * `h` must be a live handle; `stable` must be writable.
 */
enum TsStatus ts_is_stable(const struct TsConfig *h, uint8_t threshold, int32_t *stable);

/**
 * Structural characterisation for thresholds 2 and 3; writes 1 if the
 * configuration has the structure of a stable one.
 *
 * # Safety
 * `h` must be a live handle; `ok` must be writable.
 */
enum TsStatus ts_structure_check(const struct TsConfig *h, uint8_t threshold, int32_t *ok);

/**
 * Runs the Threshold-2 stability tester with accuracy `eps` in (0, 1].
 *
 * # Safety
 * `h` must be a live handle; `result` must be writable.
 */
enum TsStatus ts_test(const struct TsConfig *h,
                      double eps,
                      uint64_t seed,
                      struct TsTestResult *result);

/**
 * Moves the configuration to a nearby Threshold-2 stable one. `changed`
 * receives the number of modified cells and may be null.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum TsStatus ts_stabilize(const struct TsConfig *h,
                           double eps,
                           struct TsConfig **out,
                           size_t *changed);

/**
 * The `n×n` instance with exactly `2n` unstable Threshold-2 cells.
 *
 * # Safety
 * `out` must be writable.
 */
enum TsStatus ts_gen_hard_thr2(size_t n, struct TsConfig **out);

/**
 * The `n×n` Majority instance with few unstable cells.
 *
 * # Safety
 * `out` must be writable.
 */
enum TsStatus ts_gen_hard_majority(size_t n, struct TsConfig **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORUS_STAB_H */
