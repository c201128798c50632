#ifndef RHOSTAR_H
#define RHOSTAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum RhostarStatus {
  RHOSTAR_STATUS_OK = 0,
  RHOSTAR_STATUS_NULL_POINTER = 1,
  RHOSTAR_STATUS_INVALID_ARGUMENT = 2,
  RHOSTAR_STATUS_DIMENSION_MISMATCH = 3,
  RHOSTAR_STATUS_NON_FINITE = 4,
  RHOSTAR_STATUS_INVALID_NORM = 5,
  RHOSTAR_STATUS_NOT_SMOOTH = 6,
  RHOSTAR_STATUS_ZERO_VECTOR = 7,
  RHOSTAR_STATUS_NO_WITNESS = 8,
  RHOSTAR_STATUS_NUMERIC_FAILURE = 9,
} RhostarStatus;

/**
 * Orthogonality relation selector.
 */
typedef enum RhostarFlavor {
  RHOSTAR_FLAVOR_BIRKHOFF = 0,
  RHOSTAR_FLAVOR_ISOSCELES = 1,
  RHOSTAR_FLAVOR_RHO_MINUS = 2,
  RHOSTAR_FLAVOR_RHO_PLUS = 3,
  RHOSTAR_FLAVOR_RHO = 4,
  RHOSTAR_FLAVOR_RHO_STAR = 5,
  RHOSTAR_FLAVOR_SIP = 6,
} RhostarFlavor;

/**
 * Opaque handle to a normed space.
 */
typedef struct RhostarSpace RhostarSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable name of a status code (static storage, do not free).
 */
const char *rhostar_status_name(enum RhostarStatus status);

/**
 * Creates an l1 space of the given dimension.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RhostarStatus rhostar_space_l1(size_t dim, struct RhostarSpace **out);

/**
 * Creates an l-infinity space of the given dimension.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RhostarStatus rhostar_space_linf(size_t dim, struct RhostarSpace **out);

/**
 * Creates an lp space (1 < p < infinity).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RhostarStatus rhostar_space_lp(size_t dim, double p, struct RhostarSpace **out);

/**
 * Creates a weighted lp space; `weights` must hold `dim` positive entries.
 *
 * # Safety
 * `weights` must point to `dim` doubles and `out` must be valid.
 */
enum RhostarStatus rhostar_space_weighted_lp(size_t dim,
                                             double p,
                                             const double *weights,
                                             struct RhostarSpace **out);

/**
 * Creates a polyhedral space from `n_rows` functionals of length `dim`,
 * stored row-major in `rows`. The functionals must have full column rank.
 *
 * # Safety
 * `rows` must point to `n_rows * dim` doubles and `out` must be valid.
 */
enum RhostarStatus rhostar_space_polyhedral(size_t dim,
                                            const double *rows,
                                            size_t n_rows,
                                            struct RhostarSpace **out);

/**
 * Releases a space handle. Passing NULL is a no-op.
 *
 * # Safety
 * `space` must have been produced by a `rhostar_space_*` constructor and
 * not freed before.
 */
void rhostar_space_free(struct RhostarSpace *space);

/**
 * Dimension of the space, or 0 for NULL.
 *
 * # Safety
 * `space` must be a live handle or NULL.
 */
size_t rhostar_space_dim(const struct RhostarSpace *space);

/**
 * ||x|| for a coordinate buffer of length `len`.
 *
 * # Safety
 * `x` must point to `len` doubles; `out` must be valid.
 */
enum RhostarStatus rhostar_norm(const struct RhostarSpace *space,
                                const double *x,
                                size_t len,
                                double *out);

/**
 * rho_-(x, y).
 *
 * # Safety
 * `x` and `y` must point to `len` doubles; `out` must be valid.
 */
enum RhostarStatus rhostar_rho_minus(const struct RhostarSpace *space,
                                     const double *x,
                                     const double *y,
                                     size_t len,
                                     double *out);

/**
 * rho_+(x, y).
 *
 * # Safety
 * `x` and `y` must point to `len` doubles; `out` must be valid.
 */
enum RhostarStatus rhostar_rho_plus(const struct RhostarSpace *space,
                                    const double *x,
                                    const double *y,
                                    size_t len,
                                    double *out);

/**
 * rho(x, y) = (rho_- + rho_+) / 2.
 *
 * # Safety
 * `x` and `y` must point to `len` doubles; `out` must be valid.
 */
enum RhostarStatus rhostar_rho(const struct RhostarSpace *space,
                               const double *x,
                               const double *y,
                               size_t len,
                               double *out);

/**
 * rho_star(x, y) = rho_-(x, y) rho_+(x, y).
 *
 * # Safety
 * `x` and `y` must point to `len` doubles; `out` must be valid.
 */
enum RhostarStatus rhostar_rho_star(const struct RhostarSpace *space,
                                    const double *x,
                                    const double *y,
                                    size_t len,
                                    double *out);

/**
 * Decides x perp y for the requested flavor at the given tolerances.
 * Writes the verdict into `out_holds`; `out_residual` and `out_scale` may
 * be NULL when not needed.
 *
 * # Safety
 * `x` and `y` must point to `len` doubles; `out_holds` must be valid.
 */
enum RhostarStatus rhostar_is_orthogonal(const struct RhostarSpace *space,
                                         const double *x,
                                         const double *y,
                                         size_t len,
                                         enum RhostarFlavor flavor,
                                         double abs_tol,
                                         double rel_tol,
                                         bool *out_holds,
                                         double *out_residual,
                                         double *out_scale);

/**
 * Thalesian decomposition: writes y with x perp_rho_star y and
 * x + y perp_rho_star lambda x - y into `out_y` (length `len`), plus both
 * residuals and the success flag. A false flag with status Ok means the
 * residual contract could not be met (the decomposition may not exist at
 * this point of a non-smooth space).
 *
 * # Safety
 * `x` must point to `len` doubles; `out_y` must have room for `len`
 * doubles; the remaining out pointers may be NULL.
 */
enum RhostarStatus rhostar_thalesian_decompose(const struct RhostarSpace *space,
                                               const double *x,
                                               size_t len,
                                               double lambda,
                                               uint64_t seed,
                                               double *out_y,
                                               double *out_residual_first,
                                               double *out_residual_second,
                                               bool *out_holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RHOSTAR_H */
