/* C interface to the texwarp library: orthographic texture warps, ambiguity
 * analysis over the deficit cone, and metric-upgrade recovery.
 *
 * All 2x2 matrices are passed as double[4], row-major. Symmetric matrices
 * travel as double[3] = (m11, m12, m22). Functions return TW_OK on success;
 * every other code identifies the failure. Handles are created by the
 * library and must be released with the matching _destroy function.
 */
#ifndef TEXWARP_H
#define TEXWARP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tw_status {
  TW_OK = 0,
  TW_ERR_INVALID_ARGUMENT,
  TW_ERR_NEGATIVE_DETERMINANT,
  TW_ERR_SINGULAR_VALUE_MISMATCH,
  TW_ERR_RANK_DEFICIENT,
  TW_ERR_DOMAIN,
  TW_ERR_NOT_POSITIVE_DEFINITE,
  TW_ERR_RANK_MISMATCH,
  TW_ERR_EMPTY_INPUT,
  TW_ERR_CONSTRUCTION_FAILED,
  TW_ERR_INCONSISTENT,
  TW_ERR_SINGULAR,
  TW_ERR_VALIDATION_FAILED,
  TW_ERR_DEGENERATE_INPUT,
  TW_ERR_INTERNAL
} tw_status;

const char* tw_status_string(tw_status status);

typedef struct tw_tolerances {
  double eps_warp;
  double eps_cone;
  double eps_rank;
} tw_tolerances;

tw_tolerances tw_default_tolerances(void);

typedef struct tw_warpset tw_warpset;
typedef struct tw_verdict tw_verdict;
typedef struct tw_recovery tw_recovery;
typedef struct tw_image tw_image;

/* ---- warp primitives ---- */

tw_status tw_warp_compose(double theta1, double r, double theta2,
                          double out[4]);

/* Canonical factors (theta1 in [0, pi), r, theta2 in [0, 2 pi)). Validates
 * the matrix first. */
tw_status tw_warp_decompose(const double m[4], const tw_tolerances* tol,
                            double factors_out[3]);

/* factors_out may be NULL. */
tw_status tw_warp_validate(const double m[4], const tw_tolerances* tol,
                           double factors_out[3]);

tw_status tw_warp_gram_deficit(const double m[4], const tw_tolerances* tol,
                               double h_out[3]);

tw_status tw_cone_check(const double h[3], const tw_tolerances* tol,
                        int* on_cone, int* on_negative_semicone,
                        double* residual);

tw_status tw_warp_normal(const double m[4], const tw_tolerances* tol,
                         int branch, double n_out[3]);

/* Singular values of an arbitrary 2x2, descending; no validity check. */
tw_status tw_warp_singular_values(const double m[4], double sv_out[2]);

/* splitmix64 step; advances *state and returns a uniform double in [0,1). */
double tw_rng_next(uint64_t* state);

/* ---- warp sets ---- */

tw_status tw_warpset_create(const double* matrices, size_t count,
                            tw_warpset** out);
void tw_warpset_destroy(tw_warpset* ws);
size_t tw_warpset_count(const tw_warpset* ws);
tw_status tw_warpset_get(const tw_warpset* ws, size_t index, double out[4]);

tw_status tw_hemisphere_warpset(double lambda, int n_radii, int n_angles,
                                double rho2_min, double rho2_max,
                                tw_warpset** out);

/* b may be NULL (observed == truth); truth_out may be NULL. */
tw_status tw_random_warpset(uint64_t seed, size_t n, double r_min,
                            const double* b, tw_warpset** observed_out,
                            tw_warpset** truth_out);

/* ---- ambiguity analysis ---- */

tw_status tw_analyze(const tw_warpset* ws, const tw_tolerances* tol,
                     uint64_t seed, tw_verdict** out);
void tw_verdict_destroy(tw_verdict* v);
int tw_verdict_is_ambiguous(const tw_verdict* v);
int tw_verdict_affine_rank(const tw_verdict* v);
/* "generic_rank3", "ellipse_slice", ... for unique verdicts, else "". */
const char* tw_verdict_reason(const tw_verdict* v);
/* "hyperbola", "ellipse", ... when a slice was classified, else "". */
const char* tw_verdict_conic(const tw_verdict* v);
int tw_verdict_has_plane(const tw_verdict* v);
/* out = (alpha, beta, gamma, delta). */
tw_status tw_verdict_plane(const tw_verdict* v, double out[4]);
size_t tw_verdict_alternative_count(const tw_verdict* v);
tw_status tw_verdict_alternative(const tw_verdict* v, size_t index,
                                 double out[4]);
size_t tw_verdict_margin_count(const tw_verdict* v);
tw_status tw_verdict_margin(const tw_verdict* v, size_t index,
                            const char** name, double* value);

tw_status tw_hemisphere_alt_b(double lambda, double out[4]);

/* ---- metric-upgrade recovery ---- */

tw_status tw_recover(const tw_warpset* ws, const tw_tolerances* tol,
                     tw_recovery** out);
void tw_recovery_destroy(tw_recovery* r);
/* "unique", "family" or "underdetermined". */
const char* tw_recovery_variant(const tw_recovery* r);
int tw_recovery_rank(const tw_recovery* r);
double tw_recovery_residual(const tw_recovery* r);
size_t tw_recovery_solution_count(const tw_recovery* r);
tw_status tw_recovery_solution(const tw_recovery* r, size_t index,
                               double m_out[3], double* d_out);
tw_status tw_recovery_b(const tw_recovery* r, size_t index, double out[4]);
/* Recovered warps of one solution; TW_ERR_VALIDATION_FAILED when that
 * solution does not yield a valid warp set. */
tw_status tw_recovery_warps(const tw_recovery* r, size_t index,
                            tw_warpset** out);

/* ---- images ---- */

/* data may be NULL for a white image. */
tw_status tw_image_create(int width, int height, int channels,
                          const unsigned char* data, tw_image** out);
void tw_image_destroy(tw_image* img);
int tw_image_width(const tw_image* img);
int tw_image_height(const tw_image* img);
int tw_image_channels(const tw_image* img);
const unsigned char* tw_image_data(const tw_image* img);

tw_status tw_builtin_square_element(tw_image** out);

tw_status tw_render_warped(const tw_image* element, const double warp[4],
                           int out_size, double scale, tw_image** out);

/* Any output pointer may be NULL to skip that image. */
tw_status tw_paint_hemisphere(double lambda, int n_radii, int n_angles,
                              double rho2_min, double rho2_max,
                              const tw_image* element, tw_image** composite,
                              tw_image** normals_true, tw_image** normals_alt,
                              tw_image** element_alt);

#ifdef __cplusplus
}
#endif

#endif /* TEXWARP_H */
