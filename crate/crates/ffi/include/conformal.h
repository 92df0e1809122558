#ifndef CONFORMAL_H
#define CONFORMAL_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values shared with the command-line tool keep
 * their meaning there.
 */
typedef enum ConformalStatus {
  CONFORMAL_STATUS_OK = 0,
  CONFORMAL_STATUS_PARSE = 2,
  CONFORMAL_STATUS_RESONANT = 3,
  CONFORMAL_STATUS_NOT_INVARIANT = 4,
  CONFORMAL_STATUS_IO = 6,
  CONFORMAL_STATUS_NULL_POINTER = 7,
  CONFORMAL_STATUS_PANIC = 8,
} ConformalStatus;

/**
 * An invariant-operator candidate: weights, signature and coefficient table.
 */
typedef struct ConformalOperator ConformalOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds `B_2k` for signature `(p,q)` with `c_{0,k,0} = 1`.
 *
 * # Safety
 * `lambda` and `mu` are nul-terminated strings; `out` is writable.
 */
enum ConformalStatus conformal_operator_construct(uint32_t p,
                                                  uint32_t q,
                                                  uint32_t k,
                                                  const char *lambda,
                                                  const char *mu,
                                                  struct ConformalOperator **out);

/**
 * Parses an operator document as written by
 * [`conformal_operator_to_json`].
 *
 * # Safety
 * `json` is a nul-terminated string; `out` is writable.
 */
enum ConformalStatus conformal_operator_from_json(const char *json, struct ConformalOperator **out);

/**
 * # Safety
 * `op` is a live handle; `out` is writable. Free the string with
 * [`conformal_string_free`].
 */
enum ConformalStatus conformal_operator_to_json(const struct ConformalOperator *op, char **out);

/**
 * Writes the homogeneity level `k`.
 *
 * # Safety
 * `op` is a live handle; `out` is writable.
 */
enum ConformalStatus conformal_operator_k(const struct ConformalOperator *op, uint32_t *out);

/**
 * Writes `c_{r,s,t}` as a rational string; zero off the table's level.
 *
 * # Safety
 * `op` is a live handle; `out` is writable. Free the string with
 * [`conformal_string_free`].
 */
enum ConformalStatus conformal_operator_coefficient(const struct ConformalOperator *op,
                                                    uint32_t r,
                                                    uint32_t s,
                                                    uint32_t t,
                                                    char **out);

/**
 * Applies every conformal generator to the symbol. Returns
 * `CONFORMAL_STATUS_OK` when all residuals vanish and
 * `CONFORMAL_STATUS_NOT_INVARIANT` otherwise.
 *
 * # Safety
 * `op` is a live handle.
 */
enum ConformalStatus conformal_operator_verify(const struct ConformalOperator *op);

/**
 * # Safety
 * `op` is null or a handle from this library, not yet freed.
 */
void conformal_operator_free(struct ConformalOperator *op);

/**
 * Coefficients of the `k`-th one-dimensional transvectant as a JSON array
 * of rational strings; entry `i` multiplies `f^(i) g^(k-i)`.
 *
 * # Safety
 * `lambda` and `mu` are nul-terminated strings; `out` is writable. Free the
 * string with [`conformal_string_free`].
 */
enum ConformalStatus conformal_transvectant_json(uint32_t k,
                                                 const char *lambda,
                                                 const char *mu,
                                                 char **out);

/**
 * Message for the last failure on this thread, or null if the last call
 * succeeded. Free with [`conformal_string_free`].
 */
char *conformal_last_error_message(void);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void conformal_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONFORMAL_H */
