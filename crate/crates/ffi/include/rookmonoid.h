#ifndef ROOKMONOID_H
#define ROOKMONOID_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RmStatus {
  RM_STATUS_OK = 0,
  RM_STATUS_NULL_POINTER = 1,
  RM_STATUS_INVALID_ARGUMENT = 2,
  RM_STATUS_INDEX_OUT_OF_RANGE = 3,
  RM_STATUS_BUFFER_TOO_SMALL = 4,
  RM_STATUS_INCOMPARABLE = 5,
  RM_STATUS_BOUND_EXCEEDED = 6,
  RM_STATUS_UNGRADED = 7,
  RM_STATUS_FAILED = 8,
  RM_STATUS_PANIC = 9,
} RmStatus;

/**
 * Opaque poset handle. Free with `rm_poset_free`.
 */
typedef struct RmPoset RmPoset;

/**
 * Edge label `(first, second)`.
 */
typedef struct RmLabel {
  uint8_t first;
  uint8_t second;
} RmLabel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *rm_last_error_message(void);

/**
 * Builds `rook:n`, `sym:n` or `rook:n:k` (n at most 6).
 *
 * # Safety
 * `instance` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RmStatus rm_poset_build(const char *instance, struct RmPoset **out);

/**
 * # Safety
 * `out` must be valid.
 */
enum RmStatus rm_poset_build_rook(size_t n, struct RmPoset **out);

/**
 * # Safety
 * `out` must be valid.
 */
enum RmStatus rm_poset_build_symmetric(size_t n, struct RmPoset **out);

/**
 * The subposet of `R_n` with exactly `k` rooks.
 *
 * # Safety
 * `out` must be valid.
 */
enum RmStatus rm_poset_build_rank_level(size_t n, size_t k, struct RmPoset **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `poset` must come from a build function and not be freed twice.
 */
void rm_poset_free(struct RmPoset *poset);

/**
 * Number of elements.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_len(const struct RmPoset *poset, size_t *out);

/**
 * Matrix dimension `n`, which is the length of every element.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_dimension(const struct RmPoset *poset, size_t *out);

/**
 * Copies the one-line entries of element `index` into `buf`.
 *
 * # Safety
 * `buf` must hold `cap` bytes.
 */
enum RmStatus rm_poset_element(const struct RmPoset *poset, size_t index, uint8_t *buf, size_t cap);

/**
 * Finds the index of the element with the given entries.
 *
 * # Safety
 * `entries` must hold `len` bytes.
 */
enum RmStatus rm_poset_index_of(const struct RmPoset *poset,
                                const uint8_t *entries,
                                size_t len,
                                size_t *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_rank(const struct RmPoset *poset, size_t index, uint32_t *out);

/**
 * Number of upper covers of `index`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_cover_count(const struct RmPoset *poset, size_t index, size_t *out);

/**
 * Upper cover number `slot` of `index`, ordered by label. Unlabeled edges
 * report the label `(0,0)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_cover(const struct RmPoset *poset,
                             size_t index,
                             size_t slot,
                             size_t *target,
                             struct RmLabel *label);

/**
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_leq(const struct RmPoset *poset, size_t x, size_t y, bool *out);

/**
 * Möbius value; 0 when `x` is not below `y`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_mobius(const struct RmPoset *poset, size_t x, size_t y, int64_t *out);

/**
 * Lexicographically first maximal chain of `[x, y]`. Writes `len + 1`
 * vertex indices and `len` labels, where `len` is the interval length,
 * and stores `len` in `out_len`. With `cap` too small, only `out_len` is
 * written and the status is `BufferTooSmall`.
 *
 * # Safety
 * `vertices` must hold `cap + 1` entries and `labels` `cap` entries.
 */
enum RmStatus rm_poset_lex_first_chain(const struct RmPoset *poset,
                                       size_t x,
                                       size_t y,
                                       size_t *vertices,
                                       struct RmLabel *labels,
                                       size_t cap,
                                       size_t *out_len);

/**
 * Number of maximal chains of `[x, y]` with weakly increasing labels,
 * saturating at `UINT64_MAX`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmStatus rm_poset_count_increasing_chains(const struct RmPoset *poset,
                                               size_t x,
                                               size_t y,
                                               uint64_t *out);

/**
 * Runs a verification campaign and returns its JSON report through
 * `json_out` (free it with `rm_string_free`). `checks` and `scope` may be
 * NULL for the defaults. The status is `Failed` when a check fails; the
 * report is still written.
 *
 * # Safety
 * String arguments must be NUL-terminated or NULL; out pointers valid.
 */
enum RmStatus rm_verify(const char *instance,
                        const char *checks,
                        const char *scope,
                        size_t threads,
                        char **json_out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void rm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROOKMONOID_H */
