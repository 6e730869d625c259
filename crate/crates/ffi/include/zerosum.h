#ifndef ZEROSUM_H
#define ZEROSUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum ZsStatus {
  ZS_STATUS_OK = 0,
  ZS_STATUS_NULL_POINTER = 1,
  ZS_STATUS_INVALID_UTF8 = 2,
  ZS_STATUS_PARSE = 3,
  ZS_STATUS_INVALID_ARGUMENT = 4,
  ZS_STATUS_BUDGET_EXCEEDED = 5,
  ZS_STATUS_INFEASIBLE = 6,
  ZS_STATUS_CLAIM_VIOLATION = 7,
  ZS_STATUS_PANIC = 8,
} ZsStatus;

/**
 * A group `C_n` or `C_n ⋊_s C_2`.
 */
typedef struct ZsGroup ZsGroup;

/**
 * A finite multiset over a group.
 */
typedef struct ZsSequence ZsSequence;

/**
 * Message for the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next call on the same thread.
 */
const char *zs_last_error(void);

/**
 * Parses a group literal such as `metacyclic n=15 s=11` or `cyclic n=7`.
 *
 * # Safety
 * `literal` must be a NUL-terminated string and `out` a writable pointer.
 */
enum ZsStatus zs_group_parse(const char *literal, struct ZsGroup **out);

/**
 * Group order, or 0 for a null handle.
 *
 * # Safety
 * `group` must be null or a live handle from [`zs_group_parse`].
 */
uint32_t zs_group_order(const struct ZsGroup *group);

/**
 * # Safety
 * `group` must be null or a handle from [`zs_group_parse`] not yet freed.
 */
void zs_group_free(struct ZsGroup *group);

/**
 * Parses sequence file text: a `group` line and a `seq` line.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum ZsStatus zs_sequence_parse(const char *text, struct ZsSequence **out);

/**
 * Number of terms counted with multiplicity, or 0 for a null handle.
 *
 * # Safety
 * `seq` must be null or a live handle from [`zs_sequence_parse`].
 */
size_t zs_sequence_len(const struct ZsSequence *seq);

/**
 * # Safety
 * `seq` must be null or a handle from [`zs_sequence_parse`] not yet freed.
 */
void zs_sequence_free(struct ZsSequence *seq);

/**
 * Looks for a product-one subsequence of length `k`. Sets `*found`, and when
 * one exists and `witness` is non-null stores its witness line there. A
 * `budget` of 0 keeps the default.
 *
 * # Safety
 * `seq` must be a live handle, `found` writable, `witness` null or writable.
 */
enum ZsStatus zs_has_product_one(const struct ZsSequence *seq,
                                 size_t k,
                                 uint64_t budget,
                                 bool *found,
                                 char **witness);

/**
 * Checks a `witness k=.. target=.. : ..` line against `seq`. A rejected
 * witness is not an error: `*valid` is false and [`zs_last_error`] gives the
 * reason.
 *
 * # Safety
 * `seq` must be a live handle, `line` NUL-terminated and `valid` writable.
 */
enum ZsStatus zs_verify_witness(const struct ZsSequence *seq, const char *line, bool *valid);

/**
 * The Gao constant of `group` by exhaustive enumeration. Large groups give
 * [`ZsStatus::Infeasible`].
 *
 * # Safety
 * `group` must be a live handle and `value` writable.
 */
enum ZsStatus zs_gao_constant(const struct ZsGroup *group, size_t *value);

/**
 * A product-one subsequence of length `6n2` for a sequence of at least
 * `9n2` terms over a family group, written to `*witness` as a witness line.
 *
 * # Safety
 * `seq` must be a live handle and `witness` writable.
 */
enum ZsStatus zs_find_big_product_one(const struct ZsSequence *seq, char **witness);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void zs_string_free(char *s);

#endif  /* ZEROSUM_H */
