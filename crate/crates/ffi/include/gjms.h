/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef GJMS_H
#define GJMS_H

#include <stddef.h>
#include <stdint.h>

#define GJMS_SCHEME_GAUSS_KRONROD 0

#define GJMS_SCHEME_TANH_SINH 1

typedef enum GjmsStatus {
  GJMS_STATUS_OK = 0,
  // Even dimension, `k < 1`, bad tolerance or similar.
  GJMS_STATUS_INVALID_ARGUMENT = 1,
  // `2k > d`: the determinant integral diverges.
  GJMS_STATUS_DIVERGENT = 2,
  // Quadrature ran out of evaluations.
  GJMS_STATUS_NOT_CONVERGED = 3,
  GJMS_STATUS_NULL_POINTER = 4,
  // Malformed JSON or UTF-8.
  GJMS_STATUS_PARSE = 5,
  // Internal panic caught at the boundary.
  GJMS_STATUS_PANIC = 6,
} GjmsStatus;

// Opaque exact expression: rational combination of `1`, `log 2` and
// `zeta(odd)` with integer powers of `pi`.
typedef struct GjmsExpr GjmsExpr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Exact `log det P_{2k}(d)` from the closed form.
//
// # Safety
// `out` must be a valid pointer to writable `GjmsExpr *` storage.
enum GjmsStatus gjms_logdet_closed_form(int64_t d, int64_t k, struct GjmsExpr **out);

// Exact `log det P_{2k}(d)` assembled from the product rule.
//
// # Safety
// `out` must be a valid pointer to writable `GjmsExpr *` storage.
enum GjmsStatus gjms_logdet_via_product(int64_t d, int64_t k, struct GjmsExpr **out);

// `f_m = int_0^inf dx / ((x^2 + pi^2) cosh^m(x/2))` as an exact expression.
//
// # Safety
// `out` must be a valid pointer to writable `GjmsExpr *` storage.
enum GjmsStatus gjms_f_value(uint32_t m, struct GjmsExpr **out);

// Parse the JSON form produced by `gjms_expr_to_json`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` as for the constructors.
enum GjmsStatus gjms_expr_from_json(const char *json, struct GjmsExpr **out);

// Release an expression. Null is ignored.
//
// # Safety
// `expr` must come from this library and not have been freed.
void gjms_expr_free(struct GjmsExpr *expr);

// 1 when equal, 0 when not, -1 if either pointer is null.
//
// # Safety
// Non-null arguments must be live handles.
int32_t gjms_expr_equal(const struct GjmsExpr *a, const struct GjmsExpr *b);

// Number of terms after normalisation.
//
// # Safety
// `expr` must be a live handle or null (returns 0).
uintptr_t gjms_expr_term_count(const struct GjmsExpr *expr);

// Evaluate to a double, working at `digits` decimal digits (0 selects the
// default, honouring `GJMS_DIGITS`).
//
// # Safety
// `expr` must be a live handle; `out` must be writable.
enum GjmsStatus gjms_expr_evaluate(const struct GjmsExpr *expr, uint32_t digits, double *out);

// Decimal string of the value with `significant` digits.
//
// # Safety
// `expr` must be a live handle; `out` must be writable. Free the result
// with `gjms_string_free`.
enum GjmsStatus gjms_expr_to_decimal(const struct GjmsExpr *expr, uint32_t significant, char **out);

// `[{"atom": ..., "pi_pow": ..., "coeff": "p/q"}, ...]`.
//
// # Safety
// As `gjms_expr_to_decimal`.
enum GjmsStatus gjms_expr_to_json(const struct GjmsExpr *expr, char **out);

// # Safety
// As `gjms_expr_to_decimal`.
enum GjmsStatus gjms_expr_to_latex(const struct GjmsExpr *expr, char **out);

// Plain text form, e.g. `1/4*log(2) - 3/8*zeta(3)/pi^2`.
//
// # Safety
// As `gjms_expr_to_decimal`.
enum GjmsStatus gjms_expr_to_string(const struct GjmsExpr *expr, char **out);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void gjms_string_free(char *s);

// Numeric `log det P_{2k}(d)` by quadrature. `error_estimate` may be null.
//
// # Safety
// `value` must be writable; `error_estimate` writable or null.
enum GjmsStatus gjms_logdet_quadrature(int64_t d,
                                       int64_t k,
                                       double abs_tol,
                                       int32_t scheme,
                                       double *value,
                                       double *error_estimate);

// Numeric `log det(B^2 - (j + 1/2)^2)` on the `d`-sphere.
//
// # Safety
// As `gjms_logdet_quadrature`.
enum GjmsStatus gjms_logdet_factor_quadrature(int64_t d,
                                              int64_t j,
                                              double abs_tol,
                                              int32_t scheme,
                                              double *value,
                                              double *error_estimate);

// Nörlund number `D^{(m)}_{2n}` as `"p/q"` or `"p"`.
//
// # Safety
// `out` must be writable; free the result with `gjms_string_free`.
enum GjmsStatus gjms_norlund(uint32_t m, uint32_t n, char **out);

// Central factorial coefficient `t(n, k)` as `"p/q"` or `"p"`.
//
// # Safety
// As `gjms_norlund`.
enum GjmsStatus gjms_central_t(uint32_t n, uint32_t k, char **out);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *gjms_last_error_message(void);

// Library version, static storage.
const char *gjms_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GJMS_H */
