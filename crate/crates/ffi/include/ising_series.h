#ifndef ISING_SERIES_H
#define ISING_SERIES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ISING_OK 0

#define ISING_ERR_NULL 1

#define ISING_ERR_INVALID_ARG 2

#define ISING_ERR_BUDGET 3

#define ISING_ERR_INTERNAL 4

#define ISING_ERR_PANIC 5

#define ISING_LATTICE_CHAIN 0

#define ISING_LATTICE_SQ 1

#define ISING_LATTICE_PT 2

#define ISING_LATTICE_SC 3

/**
 * Exact series coefficients with their decimal approximations.
 */
typedef struct IsingSeries IsingSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ising_version(void);

/**
 * Message for the last failed call on this thread; empty after a success. Owned by the library.
 */
const char *ising_last_error_message(void);

/**
 * Triangular-lattice critical point x_c and T_c/J.
 *
 * # Safety
 * Non-null pointers must be valid for writes.
 */
int ising_critical_point(double *x_c, double *t_c_over_j);

/**
 * Free energy per site of the triangular lattice; `printed_theta` selects the printed integrand.
 *
 * # Safety
 * `phi` must be valid for writes; `quad_error` may be null.
 */
int ising_free_energy(double t, double j, int printed_theta, double *phi, double *quad_error);

/**
 * Filtered cubic series per site: `log_pipeline` = 0 for Ψ^{1/2}, non-zero for ½ log Ψ.
 *
 * # Safety
 * `out` must be valid for writes.
 */
int ising_series_sc_filtered(size_t order, int log_pipeline, struct IsingSeries **out);

/**
 * Exhaustive partition polynomial 2^{-N} Σ_σ Π(1 + xσσ′) on a finite lattice.
 *
 * # Safety
 * `sides` must point to `n_sides` readable values; `out` must be valid for writes.
 */
int ising_series_oracle_partition(int lattice,
                                  const size_t *sides,
                                  size_t n_sides,
                                  int periodic,
                                  struct IsingSeries **out);

/**
 * Window product expansion on SQ or SC with the default radius.
 *
 * # Safety
 * `out` must be valid for writes.
 */
int ising_series_ht_window(int lattice,
                           size_t order,
                           int through_center,
                           int bond_dedup,
                           struct IsingSeries **out);

/**
 * Highest x-power stored, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t ising_series_order(const struct IsingSeries *s);

/**
 * Coefficient of x^r as a double (NaN if not representable).
 *
 * # Safety
 * `s` must be null or a live handle; `out` must be valid for writes.
 */
int ising_series_coeff_f64(const struct IsingSeries *s, size_t r, double *out);

/**
 * Exact coefficient of x^r; release the string with `ising_string_free`.
 *
 * # Safety
 * `s` must be null or a live handle; `out` must be valid for writes.
 */
int ising_series_coeff_string(const struct IsingSeries *s, size_t r, char **out);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void ising_series_free(struct IsingSeries *s);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void ising_string_free(char *s);

/**
 * Whitney parity of a closed triangular walk given as directions 1..=6 from the origin.
 * `printed_layout` selects the printed neighbour table instead of the planar one.
 *
 * # Safety
 * `dirs` must point to `len` readable bytes; `passes` must be valid for writes.
 */
int ising_whitney_check(const uint8_t *dirs, size_t len, int printed_layout, int *passes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISING_SERIES_H */
