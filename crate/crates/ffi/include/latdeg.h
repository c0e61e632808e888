#ifndef LATDEG_H
#define LATDEG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LatdegStatus {
  LATDEG_STATUS_OK = 0,
  LATDEG_STATUS_NULL_POINTER = 1,
  LATDEG_STATUS_INVALID_ARGUMENT = 2,
  LATDEG_STATUS_NOT_A_GROUP = 3,
  LATDEG_STATUS_ORDER_CAP_EXCEEDED = 4,
  LATDEG_STATUS_PARSE_ERROR = 5,
  LATDEG_STATUS_CONSTRUCTION_FAILURE = 6,
  /**
   * An exact value does not fit the 64-bit output.
   */
  LATDEG_STATUS_OVERFLOW = 7,
  LATDEG_STATUS_IO = 8,
  LATDEG_STATUS_PANIC = 9,
} LatdegStatus;

/**
 * Opaque group handle.
 */
typedef struct LatdegGroup LatdegGroup;

/**
 * `num / den` in lowest terms.
 */
typedef struct LatdegFraction {
  uint64_t num;
  uint64_t den;
} LatdegFraction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a group from a spec such as `dihedral:8`, `schmidt:2:7`, or the
 * path of a group file holding one group.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum LatdegStatus latdeg_group_from_spec(const char *spec, struct LatdegGroup **out);

/**
 * Builds a group from a row-major `n x n` multiplication table on
 * `0..n`; the table is checked to define a group.
 *
 * # Safety
 * `table` must point to `n * n` values; `label` may be null.
 */
enum LatdegStatus latdeg_group_from_table(const uint32_t *table,
                                          size_t n,
                                          const char *label,
                                          struct LatdegGroup **out);

/**
 * Builds a group from the JSON text of a group file holding one group.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LatdegStatus latdeg_group_from_json(const char *json, struct LatdegGroup **out);

/**
 * # Safety
 * `g` must come from a `latdeg_group_from_*` call and not be used again.
 */
void latdeg_group_free(struct LatdegGroup *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum LatdegStatus latdeg_group_order(const struct LatdegGroup *g, size_t *out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum LatdegStatus latdeg_subgroup_count(const struct LatdegGroup *g, size_t *out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum LatdegStatus latdeg_sd(const struct LatdegGroup *g, struct LatdegFraction *out);

/**
 * `sd*` and the orders of a section `H/N` attaining it.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable; `host_order` and
 * `kernel_order` may be null.
 */
enum LatdegStatus latdeg_sd_star(const struct LatdegGroup *g,
                                 struct LatdegFraction *out,
                                 size_t *host_order,
                                 size_t *kernel_order);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum LatdegStatus latdeg_is_iwasawa(const struct LatdegGroup *g, bool *out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum LatdegStatus latdeg_is_schmidt(const struct LatdegGroup *g, bool *out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum LatdegStatus latdeg_is_nilpotent(const struct LatdegGroup *g, bool *out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum LatdegStatus latdeg_is_solvable(const struct LatdegGroup *g, bool *out);

/**
 * Closed-form `sd` of the minimal Schmidt group of order `p^r q`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LatdegStatus latdeg_schmidt_formula(uint64_t p, uint64_t q, struct LatdegFraction *out);

/**
 * Message for the last failed call on this thread, or null after a
 * successful call. Valid until the next call on the same thread.
 */
const char *latdeg_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *latdeg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATDEG_H */
