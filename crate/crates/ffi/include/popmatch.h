#ifndef POPMATCH_H
#define POPMATCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PmStatus {
  PM_STATUS_OK = 0,
  PM_STATUS_NULL_ARGUMENT = 1,
  PM_STATUS_INVALID_UTF8 = 2,
  PM_STATUS_PARSE_ERROR = 3,
  PM_STATUS_INVALID_MATCHING = 4,
  PM_STATUS_OUT_OF_RANGE = 5,
  PM_STATUS_BUDGET_EXCEEDED = 6,
  PM_STATUS_INTERNAL = 7,
} PmStatus;

/**
 * Outcome of [`pm_verify_popular`].
 */
typedef enum PmVerdict {
  PM_VERDICT_POPULAR = 0,
  PM_VERDICT_NOT_POPULAR = 1,
  PM_VERDICT_INCONCLUSIVE = 2,
} PmVerdict;

/**
 * A validated instance.
 */
typedef struct PmInstance PmInstance;

/**
 * Output of the max-size popular solver: level-tagged edges.
 */
typedef struct PmLevelMatching PmLevelMatching;

/**
 * A matching of some instance. Functions taking both re-check that they belong together.
 */
typedef struct PmMatching PmMatching;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success. Owned by the library
 * and valid until the next call on the same thread.
 */
const char *pm_last_error_message(void);

/**
 * Parses an instance in the text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_instance_parse(const char *text, struct PmInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from [`pm_instance_parse`] not yet freed.
 */
void pm_instance_free(struct PmInstance *inst);

/**
 * Number of students, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t pm_instance_num_students(const struct PmInstance *inst);

/**
 * Number of courses, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t pm_instance_num_courses(const struct PmInstance *inst);

/**
 * Number of mutually acceptable pairs, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t pm_instance_num_edges(const struct PmInstance *inst);

/**
 * Pairwise-stable matching by student-proposing deferred acceptance.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_solve_stable(const struct PmInstance *inst, struct PmMatching **out);

/**
 * Max-size popular matching by the 2-level proposal algorithm.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_solve_maxpop(const struct PmInstance *inst, struct PmLevelMatching **out);

/**
 * # Safety
 * `lm` must be null or a handle from [`pm_solve_maxpop`] not yet freed.
 */
void pm_level_matching_free(struct PmLevelMatching *lm);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `lm` must be null or a live handle.
 */
size_t pm_level_matching_size(const struct PmLevelMatching *lm);

/**
 * Edge `index` in `(student, course)` order with its level (0 or 1).
 *
 * # Safety
 * `lm` must be a live handle; the output pointers must be valid.
 */
enum PmStatus pm_level_matching_edge(const struct PmLevelMatching *lm,
                                     size_t index,
                                     size_t *student,
                                     size_t *course,
                                     uint8_t *level);

/**
 * The matching obtained by dropping level tags, as a new handle.
 *
 * # Safety
 * `lm` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_level_matching_projection(const struct PmLevelMatching *lm,
                                           struct PmMatching **out);

/**
 * Parses a matching of `inst` from the text pair format or JSON.
 *
 * # Safety
 * `inst` must be a live handle, `text` nul-terminated and `out` a valid pointer.
 */
enum PmStatus pm_matching_parse(const struct PmInstance *inst,
                                const char *text,
                                struct PmMatching **out);

/**
 * # Safety
 * `m` must be null or a matching handle not yet freed.
 */
void pm_matching_free(struct PmMatching *m);

/**
 * Number of pairs, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t pm_matching_size(const struct PmMatching *m);

/**
 * Pair `index` in `(student, course)` order.
 *
 * # Safety
 * `m` must be a live handle; the output pointers must be valid.
 */
enum PmStatus pm_matching_pair(const struct PmMatching *m,
                               size_t index,
                               size_t *student,
                               size_t *course);

/**
 * Writes `m` in the text pair format. Release the string with [`pm_string_free`].
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum PmStatus pm_matching_to_string(const struct PmInstance *inst,
                                    const struct PmMatching *m,
                                    char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void pm_string_free(char *s);

/**
 * `Delta(m0, m1)`: the votes of all vertices for `m0` over `m1`.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum PmStatus pm_big_delta(const struct PmInstance *inst,
                           const struct PmMatching *m0,
                           const struct PmMatching *m1,
                           int64_t *out);

/**
 * Clone-graph popularity check. `optimum` receives the max weight of a complete clone matching;
 * for [`PmVerdict::NotPopular`], `witness` (if non-null) receives a matching that beats `m`.
 *
 * # Safety
 * Handles must be live; `verdict` and `optimum` valid; `witness` null or valid.
 */
enum PmStatus pm_verify_popular(const struct PmInstance *inst,
                                const struct PmMatching *m,
                                enum PmVerdict *verdict,
                                int64_t *optimum,
                                struct PmMatching **witness);

/**
 * Exhaustive popularity test within the given enumeration budget.
 *
 * # Safety
 * Handles must be live and `popular` a valid pointer.
 */
enum PmStatus pm_is_popular_bruteforce(const struct PmInstance *inst,
                                       const struct PmMatching *m,
                                       size_t max_edges,
                                       size_t max_matchings,
                                       bool *popular);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POPMATCH_H */
