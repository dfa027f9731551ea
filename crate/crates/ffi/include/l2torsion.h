#ifndef L2TORSION_H
#define L2TORSION_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum L2tStatus {
  L2T_STATUS_OK = 0,
  L2T_STATUS_NULL_ARGUMENT = 1,
  L2T_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input: parse, schema, shape or rank errors.
   */
  L2T_STATUS_INVALID_INPUT = 3,
  /**
   * The oracle or a cap could not settle the question.
   */
  L2T_STATUS_UNDECIDED = 4,
  L2T_STATUS_ESTIMATION_FAILED = 5,
  L2T_STATUS_PANIC = 6,
} L2tStatus;

/**
 * An element of the free group ring.
 */
typedef struct L2tElement L2tElement;

/**
 * A free group homomorphism.
 */
typedef struct L2tHom L2tHom;

/**
 * A torsion value over the free group ring.
 */
typedef struct L2tTorsion L2tTorsion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty when none. The
 * pointer stays valid until the next failing call on the thread.
 */
const char *l2t_last_error(void);

/**
 * Library version as a static string.
 */
const char *l2t_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void l2t_string_free(char *s);

/**
 * Parses `{"domain_rank", "codomain_rank", "images", "alphabet"?}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum L2tStatus l2t_hom_from_json(const char *json, struct L2tHom **out);

/**
 * # Safety
 * `h` must come from [`l2t_hom_from_json`] and not be freed twice.
 */
void l2t_hom_free(struct L2tHom *h);

/**
 * Whether the handlebody of the homomorphism is taut.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum L2tStatus l2t_hom_is_taut(const struct L2tHom *h, bool *out);

/**
 * Whether the handlebody of the homomorphism is a product.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum L2tStatus l2t_hom_is_product(const struct L2tHom *h, bool *out);

/**
 * Torsion of the Fox Jacobian, with the oracle limited to representation
 * degrees up to `budget_size`.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum L2tStatus l2t_hom_torsion(const struct L2tHom *h,
                               size_t budget_size,
                               uint64_t seed,
                               struct L2tTorsion **out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice.
 */
void l2t_torsion_free(struct L2tTorsion *t);

/**
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum L2tStatus l2t_torsion_is_zero(const struct L2tTorsion *t, bool *out);

/**
 * JSON document of the torsion value; free with [`l2t_string_free`].
 *
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum L2tStatus l2t_torsion_to_json(const struct L2tTorsion *t, char **out);

/**
 * Monte Carlo determinant of a torsion value.
 *
 * # Safety
 * `t` must be a live handle; `estimate` and `stderr` writable.
 */
enum L2tStatus l2t_torsion_fk_det(const struct L2tTorsion *t,
                                  size_t n,
                                  size_t trials,
                                  uint64_t seed,
                                  double *estimate,
                                  double *stderr);

/**
 * Parses an element such as `"1 + x1 x2^-1"` over `rank` generators.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum L2tStatus l2t_element_parse(size_t rank, const char *text, struct L2tElement **out);

/**
 * # Safety
 * `e` must come from [`l2t_element_parse`] and not be freed twice.
 */
void l2t_element_free(struct L2tElement *e);

/**
 * Canonical text of the element; free with [`l2t_string_free`].
 *
 * # Safety
 * `e` must be a live handle and `out` writable.
 */
enum L2tStatus l2t_element_to_string(const struct L2tElement *e, char **out);

/**
 * # Safety
 * `e` must be a live handle; `estimate` and `stderr` writable.
 */
enum L2tStatus l2t_element_fk_det(const struct L2tElement *e,
                                  size_t n,
                                  size_t trials,
                                  uint64_t seed,
                                  double *estimate,
                                  double *stderr);

/**
 * Runs a command-line invocation such as `"--seed 3 torsion-hom"` on the
 * JSON document `input` and returns the report the tool would print.
 * `input` may be null for commands that read no document.
 *
 * # Safety
 * `args` and a non-null `input` must be nul-terminated; `out` writable.
 */
enum L2tStatus l2t_run(const char *args, const char *input, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* L2TORSION_H */
