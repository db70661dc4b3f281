#ifndef INNER_DYNAMICS_H
#define INNER_DYNAMICS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call. Zero is success.
 */
typedef enum IdStatus {
  ID_STATUS_OK = 0,
  ID_STATUS_NULL_POINTER = 1,
  ID_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Evaluation point too close to a pole or an atom.
   */
  ID_STATUS_SINGULARITY = 3,
  ID_STATUS_NO_CONVERGENCE = 4,
  /**
   * Any other numerical failure.
   */
  ID_STATUS_NUMERIC = 5,
  ID_STATUS_PANIC = 6,
} IdStatus;

/**
 * Fixed-point type codes returned by [`id_tan_classify`].
 */
typedef enum IdFixedPointClass {
  ID_FIXED_POINT_CLASS_ATTRACTING_INTERIOR = 0,
  ID_FIXED_POINT_CLASS_ATTRACTING_BOUNDARY = 1,
  ID_FIXED_POINT_CLASS_PARABOLIC = 2,
  ID_FIXED_POINT_CLASS_REPELLING = 3,
} IdFixedPointClass;

/**
 * Opaque handle to a finite Blaschke product.
 */
typedef struct IdBlaschke IdBlaschke;

/**
 * Opaque handle to an entire family member.
 */
typedef struct IdFamily IdFamily;

/**
 * Opaque handle to an inner function with an atomic singular factor.
 */
typedef struct IdInner IdInner;

/**
 * Opaque handle to a pairing report.
 */
typedef struct IdReport IdReport;

/**
 * Opaque handle to a member of `a·tan z + b`.
 */
typedef struct IdTan IdTan;

/**
 * A complex number, layout-compatible with C99 `double _Complex`.
 */
typedef struct IdComplex {
  double re;
  double im;
} IdComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *id_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *id_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void id_string_free(char *s);

/**
 * Builds a family member from its JSON description, for example
 * `{"family": "sine-lambda", "lambda": 0.5}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum IdStatus id_family_from_json(const char *json, struct IdFamily **out);

/**
 * `f_λ(z) = λ·e^z`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IdStatus id_family_new_exp(struct IdComplex lambda, struct IdFamily **out);

/**
 * `f_λ(z) = λ·sin z` for real `0 < λ < 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IdStatus id_family_new_sine(double lambda, struct IdFamily **out);

/**
 * Value and derivative at `z`. Either output may be null.
 *
 * # Safety
 * `h` must be a live handle; non-null outputs must be writable.
 */
enum IdStatus id_family_eval(const struct IdFamily *h,
                             struct IdComplex z,
                             struct IdComplex *value,
                             struct IdComplex *derivative);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
void id_family_free(struct IdFamily *h);

/**
 * `e^{iφ}·∏ (z − a_k)/(1 − conj(a_k)·z)` over `n` zeros inside the disc.
 *
 * # Safety
 * `zeros` must point to `n` values (or be null when `n == 0`); `out` must
 * be writable.
 */
enum IdStatus id_blaschke_new(double phase,
                              const struct IdComplex *zeros,
                              size_t n,
                              struct IdBlaschke **out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum IdStatus id_blaschke_eval(const struct IdBlaschke *h,
                               struct IdComplex z,
                               struct IdComplex *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum IdStatus id_blaschke_derivative(const struct IdBlaschke *h,
                                     struct IdComplex z,
                                     struct IdComplex *out);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
void id_blaschke_free(struct IdBlaschke *h);

/**
 * `e^{iσ}·exp(m·(z − 1)/(z + 1))`: one atom of mass `m` at −1.
 *
 * # Safety
 * `out` must be writable.
 */
enum IdStatus id_inner_exponential_form(double mass, double sigma, struct IdInner **out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum IdStatus id_inner_eval(const struct IdInner *h, struct IdComplex z, struct IdComplex *out);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
void id_inner_free(struct IdInner *h);

/**
 * `a·tan z + b` with `a > 0` and `b` in `[−π/2, π/2]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IdStatus id_tan_new(double a, double b, struct IdTan **out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum IdStatus id_tan_eval(const struct IdTan *h, struct IdComplex z, struct IdComplex *out);

/**
 * Locates and classifies the fixed point that governs the dynamics.
 *
 * # Safety
 * `h` must be a live handle; outputs must be writable.
 */
enum IdStatus id_tan_classify(const struct IdTan *h,
                              enum IdFixedPointClass *class_,
                              struct IdComplex *location,
                              struct IdComplex *multiplier);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
void id_tan_free(struct IdTan *h);

/**
 * Multiplier `λ(τ)` at 0 of the sine-family Blaschke product with zero
 * spacing parameter `τ > 1`; it equals the `λ` of the matching `λ·sin z`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IdStatus id_sine_lambda_of_tau(double tau, double *out);

/**
 * Inverse of [`id_sine_lambda_of_tau`].
 *
 * # Safety
 * `out` must be writable.
 */
enum IdStatus id_sine_tau_of_lambda(double lambda, double *out);

/**
 * Runs a named check. `param` is `τ` for `exp`, `λ` for `sine` and
 * `fatou`, `d` for `lambda0` and ignored otherwise; NaN selects the
 * default. The tract raster of `sine` is skipped.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum IdStatus id_verify(const char *name, double param, struct IdReport **out);

/**
 * 1 when every row passed, 0 otherwise (also for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
int32_t id_report_all_pass(const struct IdReport *h);

/**
 * Number of rows (0 for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t id_report_row_count(const struct IdReport *h);

/**
 * The report as JSON; release with [`id_string_free`]. Null on failure.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
char *id_report_json(const struct IdReport *h);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
void id_report_free(struct IdReport *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INNER_DYNAMICS_H */
