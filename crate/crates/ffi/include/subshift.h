#ifndef SUBSHIFT_H
#define SUBSHIFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define SUBSHIFT_OK 0

#define SUBSHIFT_NULL_POINTER 1

#define SUBSHIFT_INVALID_UTF8 2

#define SUBSHIFT_PARSE_ERROR 3

#define SUBSHIFT_UNKNOWN_SHIFT 4

#define SUBSHIFT_TOP_UNAVAILABLE 5

#define SUBSHIFT_OUTSIDE_LANGUAGE 6

#define SUBSHIFT_MISMATCH 7

#define SUBSHIFT_CONFIG_ERROR 8

#define SUBSHIFT_UNSUPPORTED 9

#define SUBSHIFT_OTHER 10

#define SUBSHIFT_PANIC 11

/**
 * An element of a subshift algebra, tied to the shift it was parsed in.
 */
typedef struct SubshiftElement SubshiftElement;

/**
 * A subshift.
 */
typedef struct SubshiftShift SubshiftShift;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *subshift_last_error(void);

/**
 * Opens a builtin shift by name (`full-2-shift`, `golden-mean`, `even`, ...).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t subshift_shift_builtin(const char *name, struct SubshiftShift **out_shift);

/**
 * Builds the shift called `name` from a TOML workbench configuration.
 *
 * # Safety
 * `config` and `name` must be NUL-terminated strings and `out` a valid pointer.
 */
int32_t subshift_shift_from_config(const char *config,
                                   const char *name,
                                   struct SubshiftShift **out_shift);

/**
 * # Safety
 * `sh` must come from this library and not be used afterwards. Null is ignored.
 */
void subshift_shift_free(struct SubshiftShift *sh);

/**
 * Writes whether `word` is in the language of the shift.
 *
 * # Safety
 * `sh` must be a live handle, `word` a NUL-terminated string and `out` valid.
 */
int32_t subshift_language_contains(const struct SubshiftShift *sh,
                                   const char *word,
                                   bool *out_member);

/**
 * Parses an algebra expression over `ring` (`Z`, `Q` or `F<p>`), in the
 * top-free algebra when `top_free` is set.
 *
 * # Safety
 * `sh` must be a live handle, `ring` and `expr` NUL-terminated strings and `out` valid.
 */
int32_t subshift_element_parse(const struct SubshiftShift *sh,
                               const char *ring,
                               bool top_free,
                               const char *expr,
                               struct SubshiftElement **out_element);

/**
 * # Safety
 * `x` must come from this library and not be used afterwards. Null is ignored.
 */
void subshift_element_free(struct SubshiftElement *x);

/**
 * Sum of two elements of the same algebra.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
int32_t subshift_element_add(const struct SubshiftElement *a,
                             const struct SubshiftElement *b,
                             struct SubshiftElement **out_element);

/**
 * Product of two elements of the same algebra.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
int32_t subshift_element_mul(const struct SubshiftElement *a,
                             const struct SubshiftElement *b,
                             struct SubshiftElement **out_element);

/**
 * # Safety
 * `x` must be a live handle and `out` valid.
 */
int32_t subshift_element_star(const struct SubshiftElement *x,
                              struct SubshiftElement **out_element);

/**
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
int32_t subshift_element_equal(const struct SubshiftElement *a,
                               const struct SubshiftElement *b,
                               bool *out_equal);

/**
 * Canonical text of an element. Release it with `subshift_string_free`.
 *
 * # Safety
 * `x` must be a live handle and `out` valid.
 */
int32_t subshift_element_to_string(const struct SubshiftElement *x, char **out_text);

/**
 * # Safety
 * `s` must come from `subshift_element_to_string`. Null is ignored.
 */
void subshift_string_free(char *s);

/**
 * Runs the relation suite; `out_failed` receives the number of failing instances.
 *
 * # Safety
 * `sh` must be a live handle, `ring` a NUL-terminated string and `out` valid.
 */
int32_t subshift_relation_suite(const struct SubshiftShift *sh,
                                const char *ring,
                                uintptr_t max_len,
                                uintptr_t window,
                                uintptr_t *out_failed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBSHIFT_H */
