#ifndef EXACT_DECIDE_H
#define EXACT_DECIDE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ED_RULE_ML 0

#define ED_RULE_BAYES 1

#define ED_RULE_ES 2

#define ED_RULE_FRECHET 3

#define ED_RULE_COINFLIP 4

#define ED_CRITERION_MAXIMIN 0

#define ED_CRITERION_MAXIMIN_NORMALIZED 1

#define ED_CRITERION_BAYES 2

#define ED_CRITERION_ML 3

typedef enum EdStatus {
  ED_STATUS_OK = 0,
  ED_STATUS_NULL_POINTER = 1,
  ED_STATUS_INVALID_DESIGN = 2,
  ED_STATUS_MARGIN_VIOLATION = 3,
  ED_STATUS_STRATUM_TOTAL = 4,
  ED_STATUS_INVALID_PRIOR = 5,
  ED_STATUS_DEGENERATE_POSTERIOR = 6,
  ED_STATUS_INVALID_UTILITY = 7,
  ED_STATUS_UNKNOWN_RULE = 8,
  ED_STATUS_UNKNOWN_CRITERION = 9,
  ED_STATUS_OVERFLOW = 10,
  ED_STATUS_INVALID_ARGUMENT = 11,
  ED_STATUS_PANIC = 12,
} EdStatus;

/**
 * Opaque evaluator over every stratum and outcome of one design.
 */
typedef struct EdEvaluator EdEvaluator;

/**
 * Utility weights as fractions; `per_participant` is 0 or 1.
 */
typedef struct EdUtility {
  int64_t efficacy_num;
  int64_t efficacy_den;
  int64_t unsafe_num;
  int64_t unsafe_den;
  uint8_t per_participant;
} EdUtility;

/**
 * A two-arm design and its observed cell counts.
 */
typedef struct EdTrial {
  uint32_t n;
  uint32_t m;
  uint32_t x_i1;
  uint32_t x_i0;
  uint32_t x_c1;
  uint32_t x_c0;
} EdTrial;

/**
 * Principal-stratum counts.
 */
typedef struct EdStrata {
  uint32_t live_regardless;
  uint32_t efficacious;
  uint32_t harmed;
  uint32_t die_regardless;
} EdStrata;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *ed_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ed_version(void);

/**
 * Default utility: efficacy 1/2, harm 1, per participant.
 */
struct EdUtility ed_utility_default(void);

/**
 * `P(X = x | theta)` as `numerator / denominator`, where the denominator
 * is `C(n, m)`. Fails with `Overflow` if either does not fit 64 bits.
 *
 * # Safety
 * `trial`, `theta`, `numerator` and `denominator` must be valid pointers.
 */
enum EdStatus ed_likelihood(const struct EdTrial *trial,
                            const struct EdStrata *theta,
                            uint64_t *numerator,
                            uint64_t *denominator);

/**
 * Applies rule `rule` (an `ED_RULE_*` code) under the uniform prior and
 * writes the probability of acting as `numerator / denominator`.
 *
 * # Safety
 * `trial`, `utility`, `numerator` and `denominator` must be valid pointers.
 */
enum EdStatus ed_decide(const struct EdTrial *trial,
                        const struct EdUtility *utility,
                        uint32_t rule,
                        int64_t *numerator,
                        int64_t *denominator);

/**
 * Full analysis of one trial as a JSON document, with `digits` fractional
 * digits in decimal renderings and the `top_k` most likely strata.
 *
 * # Safety
 * `trial` and `json_out` must be valid pointers. Free the result with
 * [`ed_string_free`].
 */
enum EdStatus ed_analyze_json(const struct EdTrial *trial,
                              uint32_t digits,
                              size_t top_k,
                              char **json_out);

/**
 * Builds an evaluator for design `(n, m)` under the uniform prior.
 *
 * # Safety
 * `utility` and `out` must be valid pointers.
 */
enum EdStatus ed_evaluator_new(uint32_t n,
                               uint32_t m,
                               const struct EdUtility *utility,
                               struct EdEvaluator **out);

/**
 * # Safety
 * `evaluator` must come from [`ed_evaluator_new`] and not be used again.
 * Null is ignored.
 */
void ed_evaluator_free(struct EdEvaluator *evaluator);

/**
 * Scores `rule` under `criterion`. Writes the nearest double to `value`
 * and, if `exact_out` is not null, the exact value as `"num/den"`.
 *
 * # Safety
 * `evaluator` must be live; `value` must be valid; `exact_out` may be null.
 */
enum EdStatus ed_evaluator_score(const struct EdEvaluator *evaluator,
                                 uint32_t rule,
                                 uint32_t criterion,
                                 double *value,
                                 char **exact_out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ed_string_free(char *s);

/**
 * Parses a rule name (`ml`, `bayes`, `es`, `frechet`, `coinflip`) into its
 * `ED_RULE_*` code.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `code` a valid pointer.
 */
enum EdStatus ed_rule_code(const char *name, uint32_t *code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXACT_DECIDE_H */
