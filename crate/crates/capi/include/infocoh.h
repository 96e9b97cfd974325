#ifndef INFOCOH_H
#define INFOCOH_H

/* Generated by cbindgen from infocoh-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. Anything other than `Ok` leaves a diagnostic in
 * `icoh_last_error`.
 */
typedef enum IcohStatus {
  ICOH_STATUS_OK = 0,
  ICOH_STATUS_NULL_POINTER = 1,
  ICOH_STATUS_INVALID_UTF8 = 2,
  ICOH_STATUS_INVALID_INPUT = 3,
  ICOH_STATUS_COMPUTE_FAILED = 4,
  ICOH_STATUS_PANICKED = 5,
} IcohStatus;

/**
 * Structural degree-1 verdict.
 */
typedef enum IcohVerdict {
  ICOH_VERDICT_FINITE = 0,
  ICOH_VERDICT_INFINITE = 1,
  ICOH_VERDICT_UNKNOWN = 2,
} IcohVerdict;

/**
 * Opaque handle owning a parsed structure and its probability functor.
 */
typedef struct IcohStructure IcohStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Do not free.
 */
const char *icoh_version(void);

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *icoh_last_error(void);

/**
 * Parse a JSON description (concrete, abstract, or simplicial) into a
 * handle. The input must satisfy the structure axioms.
 *
 * # Safety
 *
 * `json` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On success `*out` owns the handle and must be released with
 * `icoh_structure_free`.
 */
enum IcohStatus icoh_structure_parse(const char *json, struct IcohStructure **out);

/**
 * Release a handle returned by `icoh_structure_parse`. Null is ignored.
 *
 * # Safety
 *
 * `handle` must be null or a pointer returned by `icoh_structure_parse`
 * that has not been freed already.
 */
void icoh_structure_free(struct IcohStructure *handle);

/**
 * Number of variables in the structure, including the terminal object.
 *
 * # Safety
 *
 * `handle` must be a live handle; `out` must be a valid pointer.
 */
enum IcohStatus icoh_object_count(const struct IcohStructure *handle, uintptr_t *out);

/**
 * Number of sections of the inverse limit (compatible value tuples).
 *
 * # Safety
 *
 * `handle` must be a live handle; `out` must be a valid pointer.
 */
enum IcohStatus icoh_section_count(const struct IcohStructure *handle, uintptr_t *out);

/**
 * Re-run the structure axioms; writes true when every check passes.
 *
 * # Safety
 *
 * `handle` must be a live handle; `out` must be a valid pointer.
 */
enum IcohStatus icoh_validate(const struct IcohStructure *handle, bool *out);

/**
 * Dimension of degree-0 cocycles over laws with denominator at most
 * `bound`.
 *
 * # Safety
 *
 * `handle` must be a live handle; `out` must be a valid pointer.
 */
enum IcohStatus icoh_h0_dimension(const struct IcohStructure *handle,
                                  double alpha,
                                  uint32_t bound,
                                  uintptr_t *out);

/**
 * Degree-1 grid dimensions: cocycles, coboundaries, and their quotient.
 * Any output pointer may be null to skip that value.
 *
 * # Safety
 *
 * `handle` must be a live handle; non-null outputs must be valid pointers.
 */
enum IcohStatus icoh_grid_dimensions(const struct IcohStructure *handle,
                                     double alpha,
                                     uint32_t bound,
                                     uintptr_t *out_z1,
                                     uintptr_t *out_b1,
                                     uintptr_t *out_h1);

/**
 * Max-norm cocycle residual of the entropy cochain. Exactly 0 on the
 * rational lane at alpha = 1.
 *
 * # Safety
 *
 * `handle` must be a live handle; `out` must be a valid pointer.
 */
enum IcohStatus icoh_entropy_residual(const struct IcohStructure *handle,
                                      double alpha,
                                      uint32_t bound,
                                      double *out);

/**
 * Structural degree-1 verdict. `out_dimension` (nullable) receives the
 * predicted dimension for a finite verdict and 0 otherwise.
 *
 * # Safety
 *
 * `handle` must be a live handle; `out_verdict` must be a valid pointer.
 */
enum IcohStatus icoh_predict_h1(const struct IcohStructure *handle,
                                double alpha,
                                uint64_t seed,
                                enum IcohVerdict *out_verdict,
                                uintptr_t *out_dimension);

/**
 * Full degree-1 report as a JSON string: grid dimensions, entropy
 * residual, structural prediction, nullspace fit, and the concordance
 * verdict.
 *
 * # Safety
 *
 * `handle` must be a live handle; `out` must be a valid pointer. On
 * success `*out` must be released with `icoh_string_free`.
 */
enum IcohStatus icoh_h1_report_json(const struct IcohStructure *handle,
                                    double alpha,
                                    uint32_t bound,
                                    double tol,
                                    uint64_t seed,
                                    char **out);

/**
 * Max-norm residual of the entropy sample against the functional-equation
 * system over the Farey grid of order `bound`. Exactly 0 at alpha = 1.
 *
 * # Safety
 *
 * `out` must be a valid pointer.
 */
enum IcohStatus icoh_funceq_residual(double alpha, uint32_t bound, double *out);

/**
 * Verify the generator identities of the symmetry group in exact integer
 * arithmetic. Either output may be null.
 *
 * # Safety
 *
 * Non-null outputs must be valid pointers.
 */
enum IcohStatus icoh_modular_identities(uintptr_t *out_passed, uintptr_t *out_total);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 *
 * `ptr` must be null or a string returned by this library that has not
 * been freed already.
 */
void icoh_string_free(char *ptr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INFOCOH_H */
