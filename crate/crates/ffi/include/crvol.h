#ifndef CRVOL_H
#define CRVOL_H

/* Generated by cbindgen from crates/ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum CrvolStatus {
  CRVOL_STATUS_OK = 0,
  CRVOL_STATUS_NULL_POINTER = 1,
  CRVOL_STATUS_INVALID_UTF8 = 2,
  CRVOL_STATUS_SYNTAX = 3,
  CRVOL_STATUS_CONFIG = 4,
  CRVOL_STATUS_UNKNOWN_DOMAIN = 5,
  CRVOL_STATUS_EVAL = 6,
  CRVOL_STATUS_NUMERICAL = 7,
  CRVOL_STATUS_UNSUPPORTED = 8,
  CRVOL_STATUS_PANIC = 9,
} CrvolStatus;

/**
 * Closed-form ball quantities for [`crvol_ball_closed_form`].
 */
typedef enum CrvolBallQuantity {
  /**
   * φ as a function of the radius R.
   */
  CRVOL_BALL_QUANTITY_PHI = 0,
  CRVOL_BALL_QUANTITY_H_TILDE = 1,
  CRVOL_BALL_QUANTITY_TRANSVERSE_CURVATURE = 2,
  CRVOL_BALL_QUANTITY_S_FACTOR = 3,
  CRVOL_BALL_QUANTITY_DV_PROFILE = 4,
  /**
   * Vol({φ < ε}) as a function of ε.
   */
  CRVOL_BALL_QUANTITY_VOLUME = 5,
} CrvolBallQuantity;

/**
 * Opaque domain handle.
 */
typedef struct CrvolDomain CrvolDomain;

/**
 * Opaque parsed expression.
 */
typedef struct CrvolExpr CrvolExpr;

typedef struct CrvolPoint {
  double z_re;
  double z_im;
  double w_re;
  double w_im;
} CrvolPoint;

typedef struct CrvolPointInvariants {
  double scal;
  double a11_re;
  double a11_im;
  double residual;
} CrvolPointInvariants;

typedef struct CrvolIntegrals {
  double c0;
  double c1;
  double log_coefficient;
  double log_scale;
  double contact_volume;
} CrvolIntegrals;

typedef struct CrvolVolumeExpansion {
  double c0;
  double c1;
  double log_coefficient;
  double renormalized_volume;
  double fit_residual;
  double condition;
} CrvolVolumeExpansion;

typedef struct CrvolAnomaly {
  double full;
  double via_f_derivatives;
  double linearized;
  double scale;
} CrvolAnomaly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *crvol_version(void);

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *crvol_last_error(void);

/**
 * Built-in domain by name, e.g. `"unit_ball"` or `"bumped_ball(0.05,2)"`.
 */
enum CrvolStatus crvol_domain_builtin(const char *name, struct CrvolDomain **out);

/**
 * Domain from a TOML configuration document.
 */
enum CrvolStatus crvol_domain_from_toml(const char *text, struct CrvolDomain **out);

void crvol_domain_free(struct CrvolDomain *d);

enum CrvolStatus crvol_domain_set_mesh(struct CrvolDomain *d,
                                       size_t n_eta,
                                       size_t n_xi1,
                                       size_t n_xi2);

enum CrvolStatus crvol_domain_set_order(struct CrvolDomain *d, size_t order);

/**
 * Parses an expression in `z`, `w`.
 */
enum CrvolStatus crvol_expr_parse(const char *text, struct CrvolExpr **out);

void crvol_expr_free(struct CrvolExpr *e);

/**
 * Boundary point on the ray through the Hopf direction `(η, ξ₁, ξ₂)`.
 */
enum CrvolStatus crvol_boundary_point(const struct CrvolDomain *d,
                                      double eta,
                                      double xi1,
                                      double xi2,
                                      struct CrvolPoint *out);

/**
 * Webster curvature and torsion at a boundary point.
 */
enum CrvolStatus crvol_webster_at(const struct CrvolDomain *d,
                                  struct CrvolPoint p,
                                  struct CrvolPointInvariants *out);

/**
 * `c₀, c₁` and the log coefficient from boundary integrals on the domain's mesh.
 */
enum CrvolStatus crvol_analyze(const struct CrvolDomain *d, struct CrvolIntegrals *out);

/**
 * Volume of `{φ < ε}`; needs a special defining function.
 */
enum CrvolStatus crvol_volume_of_sublevel(const struct CrvolDomain *d, double eps, double *out);

/**
 * Fits the volume expansion to `n` samples `(eps[k], vol[k])`.
 */
enum CrvolStatus crvol_fit_volume(const double *eps,
                                  const double *vol,
                                  size_t n,
                                  struct CrvolVolumeExpansion *out);

/**
 * Conformal anomaly of `e^{2Υ}θ` on the domain's mesh.
 */
enum CrvolStatus crvol_conformal_anomaly(const struct CrvolDomain *d,
                                         const struct CrvolExpr *upsilon,
                                         struct CrvolAnomaly *out);

/**
 * Exact unit-ball quantities; the argument is R for `Phi`, ε for `Volume`, and φ otherwise.
 */
enum CrvolStatus crvol_ball_closed_form(enum CrvolBallQuantity which, double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRVOL_H */
