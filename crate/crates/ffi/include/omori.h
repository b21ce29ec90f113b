#ifndef OMORI_H
#define OMORI_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum OmoriStatus {
  OMORI_STATUS_OK = 0,
  /**
   * Null pointer, bad UTF-8, or an out-of-range argument.
   */
  OMORI_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Expression could not be parsed.
   */
  OMORI_STATUS_PARSE_ERROR = 2,
  /**
   * A documented precondition of the operation does not hold.
   */
  OMORI_STATUS_PRECONDITION = 3,
  /**
   * A checked mathematical property failed.
   */
  OMORI_STATUS_PROPERTY_VIOLATION = 4,
  /**
   * Evaluation, quadrature or root finding failed.
   */
  OMORI_STATUS_NUMERICAL = 5,
  OMORI_STATUS_IO = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  OMORI_STATUS_PANIC = 7,
} OmoriStatus;

typedef enum OmoriVerdict {
  OMORI_VERDICT_DIVERGES_DECLARED = 0,
  OMORI_VERDICT_CONVERGES_DECLARED = 1,
  OMORI_VERDICT_INCONCLUSIVE = 2,
} OmoriVerdict;

typedef enum OmoriWarpingKind {
  /**
   * `f(t) = t`
   */
  OMORI_WARPING_KIND_EUCLIDEAN = 0,
  /**
   * `f(t) = sinh t`
   */
  OMORI_WARPING_KIND_HYPERBOLIC = 1,
  /**
   * `f(t) = t exp(∫ G)`; requires a growth handle.
   */
  OMORI_WARPING_KIND_COUNTEREXAMPLE = 2,
} OmoriWarpingKind;

/**
 * A real function with two derivatives.
 */
typedef struct OmoriFunction OmoriFunction;

/**
 * A growth function after the admissibility scan.
 */
typedef struct OmoriGrowth OmoriGrowth;

typedef struct OmoriManifold OmoriManifold;

/**
 * The slowed growth function built from a growth function.
 */
typedef struct OmoriSlowed OmoriSlowed;

typedef struct OmoriSplice {
  double t_n;
  double s_n;
  double a_n;
  double v_n;
} OmoriSplice;

typedef struct OmoriRiccatiSummary {
  double t_end;
  double m_end;
  uintptr_t steps;
  bool blow_up;
  /**
   * NaN when the bound never settles.
   */
  double holds_from;
} OmoriRiccatiSummary;

typedef struct OmoriCertificate {
  double epsilon;
  double lambda0;
  double x_eps;
  double f_at_x;
  double gap;
  double grad_norm;
  double laplacian;
  bool gap_ok;
  bool lambda_ok;
  bool gradient_ok;
  bool laplacian_ok;
} OmoriCertificate;

typedef struct OmoriViolationSummary {
  double h_sup;
  double delta_h_min;
  double delta_h_min_at;
  uintptr_t splice_count;
  bool violated;
} OmoriViolationSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *omori_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *omori_version(void);

/**
 * Parses a function description (preset name, number, expression in `t`, or
 * `table:PATH`) on `[0, domain_max]`.
 */
enum OmoriStatus omori_function_new(const char *spec,
                                    double domain_max,
                                    struct OmoriFunction **out);

/**
 * Value and first two derivatives at `t`. Any output pointer may be null.
 */
enum OmoriStatus omori_function_eval(const struct OmoriFunction *f,
                                     double t,
                                     double *value,
                                     double *d1,
                                     double *d2);

void omori_function_free(struct OmoriFunction *f);

/**
 * Builds a growth function and scans `G ≥ 1`, `G' ≥ 0` on `samples` points.
 * An inadmissible function is still returned; query it with
 * [`omori_growth_is_admissible`].
 */
enum OmoriStatus omori_growth_new(const char *spec,
                                  double domain_max,
                                  uintptr_t samples,
                                  struct OmoriGrowth **out);

bool omori_growth_is_admissible(const struct OmoriGrowth *g);

/**
 * `∫_0^horizon 1/G` and the convergence verdict.
 */
enum OmoriStatus omori_growth_classify(const struct OmoriGrowth *g,
                                       double horizon,
                                       enum OmoriVerdict *verdict,
                                       double *integral);

void omori_growth_free(struct OmoriGrowth *g);

/**
 * Builds the slowed growth function on `[0, horizon]` with default scan
 * settings. `force` skips the convergence gate.
 */
enum OmoriStatus omori_slowdown_build(const struct OmoriGrowth *g,
                                      double horizon,
                                      bool force,
                                      struct OmoriSlowed **out);

enum OmoriStatus omori_slowed_eval(const struct OmoriSlowed *h,
                                   double t,
                                   double *value,
                                   double *d1);

uintptr_t omori_slowed_splice_count(const struct OmoriSlowed *h);

enum OmoriStatus omori_slowed_splice(const struct OmoriSlowed *h,
                                     uintptr_t index,
                                     struct OmoriSplice *out);

/**
 * Checks the pointwise properties of `H` on `points` grid points.
 */
enum OmoriStatus omori_slowed_check(const struct OmoriSlowed *h, uintptr_t points, bool *all_pass);

void omori_slowed_free(struct OmoriSlowed *h);

/**
 * Model manifold of dimension `dim`. `growth` is required only for the
 * counterexample warping and may be null otherwise.
 */
enum OmoriStatus omori_manifold_new(enum OmoriWarpingKind kind,
                                    uintptr_t dim,
                                    double domain_max,
                                    const struct OmoriGrowth *growth,
                                    struct OmoriManifold **out);

/**
 * Model manifold with a warping given as a function description.
 */
enum OmoriStatus omori_manifold_new_custom(const char *warping,
                                           uintptr_t dim,
                                           double domain_max,
                                           struct OmoriManifold **out);

/**
 * `Δr` and the radial Ricci curvature at radius `t > 0`.
 */
enum OmoriStatus omori_manifold_radial(const struct OmoriManifold *m,
                                       double t,
                                       double *delta_r_out,
                                       double *ricci_out);

void omori_manifold_free(struct OmoriManifold *m);

/**
 * Integrates the comparison equation with curvature bound `-G²` from
 * `m(t0) = m0` and checks `m < (√(n-1) + 1) G`.
 */
enum OmoriStatus omori_riccati(const struct OmoriGrowth *g,
                               uintptr_t dim,
                               double t0,
                               double m0,
                               double horizon,
                               struct OmoriRiccatiSummary *out);

/**
 * One λ-sweep for `test` bounded above by `level`.
 */
enum OmoriStatus omori_sweep(const struct OmoriManifold *m,
                             const struct OmoriFunction *test,
                             double level,
                             const struct OmoriGrowth *g,
                             double epsilon,
                             double horizon,
                             struct OmoriCertificate *out);

/**
 * Builds the bounded function with `Δh > 1` on the counterexample manifold.
 */
enum OmoriStatus omori_counterexample(const struct OmoriGrowth *g,
                                      uintptr_t dim,
                                      double horizon,
                                      int force,
                                      struct OmoriViolationSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMORI_H */
