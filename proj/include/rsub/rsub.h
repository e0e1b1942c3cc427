/*
 * rsub -- residual-minimizing robust PCA, geometric medians, and the
 * brute-force oracles that validate them.
 *
 * C API of the shared library. All heap objects are opaque handles created
 * and destroyed by the library; every fallible call returns a status code
 * and leaves a human-readable message in rsub_last_error() (thread-local).
 *
 * Unless stated otherwise, output parameters are written only on RSUB_OK
 * and buffers must be sized by the caller (rsub_points_dim() entries for
 * coordinate buffers, rsub_points_count() for per-point buffers).
 */

#ifndef RSUB_H
#define RSUB_H

#include <stdint.h>

#if defined(_WIN32)
#define RSUB_API __declspec(dllexport)
#elif defined(__GNUC__)
#define RSUB_API __attribute__((visibility("default")))
#else
#define RSUB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsub_status {
  RSUB_OK = 0,
  RSUB_ERROR_USAGE = 1,    /* invalid arguments or violated call contracts */
  RSUB_ERROR_DATA = 2,     /* unusable input data or files */
  RSUB_ERROR_INTERNAL = 3, /* broken library invariant; please report */
} rsub_status;

typedef enum rsub_offset_kind {
  RSUB_OFFSET_GEOMETRIC_MEDIAN = 0,
  RSUB_OFFSET_MEAN = 1,
  RSUB_OFFSET_GIVEN = 2,
  RSUB_OFFSET_NONE = 3,
} rsub_offset_kind;

typedef enum rsub_method {
  RSUB_METHOD_ROBUST_RESIDUAL = 0,
  RSUB_METHOD_CLASSICAL_PCA = 1,
  RSUB_METHOD_PCA_L1 = 2,
} rsub_method;

typedef enum rsub_terminal_status {
  RSUB_TERMINAL_CONVERGED = 0,
  RSUB_TERMINAL_ANCHOR_LOCAL_MIN = 1,
  RSUB_TERMINAL_MAX_ITERS = 2,
} rsub_terminal_status;

typedef struct rsub_points rsub_points;
typedef struct rsub_median_result rsub_median_result;
typedef struct rsub_model rsub_model;

RSUB_API const char* rsub_version(void);

/* Message for the most recent failing call on this thread. */
RSUB_API const char* rsub_last_error(void);

/* ---------------------------------------------------------------- points */

/* `data` is row-major: point i occupies data[i*dim .. i*dim+dim-1]. */
RSUB_API rsub_status rsub_points_create(const double* data, int64_t count, int64_t dim,
                                        rsub_points** out);

/* CSV, one point per row; a single non-numeric first row is skipped as a
 * header. Parse errors cite the 1-based row and column. */
RSUB_API rsub_status rsub_points_read_csv(const char* path, rsub_points** out);
RSUB_API rsub_status rsub_points_write_csv(const rsub_points* pts, const char* path);

/* Synthetic line-with-outliers instance (2D); deterministic in the seed. */
RSUB_API rsub_status rsub_points_gen_line_outliers(int64_t n_inliers, int64_t n_outliers,
                                                   double noise_sigma, uint64_t seed,
                                                   rsub_points** out);

/* Unit Gaussian cloud; deterministic in the seed. */
RSUB_API rsub_status rsub_points_gen_gaussian(int64_t count, int64_t dim, uint64_t seed,
                                              rsub_points** out);

/* Lighting-drift transform: x_i -> (3/4) x_i + i/(8N) (1 + x_i), i 1-based. */
RSUB_API rsub_status rsub_points_apply_drift(const rsub_points* pts, rsub_points** out);

RSUB_API int64_t rsub_points_count(const rsub_points* pts);
RSUB_API int64_t rsub_points_dim(const rsub_points* pts);
RSUB_API rsub_status rsub_points_get(const rsub_points* pts, int64_t index, double* out_coords);
RSUB_API void rsub_points_free(rsub_points* pts);

/* ------------------------------------------------------ geometric median */

typedef struct rsub_median_opts {
  double tolerance;  /* step-norm stop threshold, default 1e-10 */
  int64_t max_iters; /* default 100000 */
  double anchor_eps; /* snap radius; <= 0 selects 1e-12 * data diameter */
} rsub_median_opts;

RSUB_API void rsub_median_opts_init(rsub_median_opts* opts);

/* Stabilized Weiszfeld iteration from the coordinate-wise median of the
 * data. Requires pairwise distinct points. Reaching max_iters is not an
 * error; check rsub_median_converged. */
RSUB_API rsub_status rsub_median_solve(const rsub_points* pts, const rsub_median_opts* opts,
                                       rsub_median_result** out);

RSUB_API rsub_status rsub_median_point(const rsub_median_result* r, double* out_coords);
RSUB_API double rsub_median_energy(const rsub_median_result* r);
RSUB_API int64_t rsub_median_iterations(const rsub_median_result* r);
RSUB_API int rsub_median_stopped_at_anchor(const rsub_median_result* r);
RSUB_API int rsub_median_converged(const rsub_median_result* r);
RSUB_API void rsub_median_free(rsub_median_result* r);

/* -------------------------------------------------------------- fitting */

typedef struct rsub_fit_opts {
  int64_t k;                  /* directions to extract, default 1 */
  rsub_method method;         /* default RSUB_METHOD_ROBUST_RESIDUAL */
  rsub_offset_kind offset;    /* default median (mean for classical PCA) */
  const double* offset_value; /* dim entries, required iff offset == GIVEN */
  double tolerance;           /* step-norm stop, default 1e-12 */
  int64_t max_iters;          /* per stage, default 10000 */
  int64_t restarts;           /* total runs per stage; first uses PCA init */
  uint64_t seed;              /* drives the restart directions */
  double anchor_eps;          /* relative residual threshold, default 1e-9 */
} rsub_fit_opts;

/* Defaults with offset = RSUB_OFFSET_GEOMETRIC_MEDIAN; callers choosing
 * RSUB_METHOD_CLASSICAL_PCA conventionally switch the offset to the mean. */
RSUB_API void rsub_fit_opts_init(rsub_fit_opts* opts);

RSUB_API rsub_status rsub_fit(const rsub_points* pts, const rsub_fit_opts* opts,
                              rsub_model** out);

RSUB_API int64_t rsub_model_dim(const rsub_model* m);
RSUB_API int64_t rsub_model_k(const rsub_model* m);
RSUB_API rsub_method rsub_model_method(const rsub_model* m);
RSUB_API rsub_status rsub_model_offset(const rsub_model* m, double* out_coords);
RSUB_API rsub_status rsub_model_direction(const rsub_model* m, int64_t stage,
                                          double* out_coords);
RSUB_API double rsub_model_energy(const rsub_model* m, int64_t stage);
RSUB_API int64_t rsub_model_stage_iterations(const rsub_model* m, int64_t stage);
RSUB_API rsub_terminal_status rsub_model_stage_status(const rsub_model* m, int64_t stage);
RSUB_API rsub_terminal_status rsub_model_terminal_status(const rsub_model* m);
RSUB_API void rsub_model_free(rsub_model* m);

/* Attach a JSON object (UTF-8 text) recording the run configuration; it is
 * embedded in the model document and restored by rsub_model_read_json. */
RSUB_API rsub_status rsub_model_set_config_json(rsub_model* m, const char* json_text);
/* Returns the attached configuration, or an empty string; owned by m. */
RSUB_API const char* rsub_model_config_json(const rsub_model* m);

RSUB_API rsub_status rsub_model_write_json(const rsub_model* m, const char* path);
RSUB_API rsub_status rsub_model_read_json(const char* path, rsub_model** out);

/* b + B B^T (x - b) per point. */
RSUB_API rsub_status rsub_model_reconstruct(const rsub_model* m, const rsub_points* pts,
                                            rsub_points** out);
/* ||x_i - x_i_reconstructed|| per point; out_distances has count entries. */
RSUB_API rsub_status rsub_model_distances(const rsub_model* m, const rsub_points* pts,
                                          double* out_distances);

/* ------------------------------------------------------------ distances */

/* Equal-width bins spanning [0, max distance]; all-zero distances land in
 * bin 0. out_counts has `bins` entries. */
RSUB_API rsub_status rsub_distance_histogram(const double* distances, int64_t count,
                                             int64_t bins, int64_t* out_counts,
                                             double* out_bin_width);

/* Two-column TSV: 1-based index, distance. */
RSUB_API rsub_status rsub_write_distances_tsv(const double* distances, int64_t count,
                                              const char* path);

/* ----------------------------------------------------- validation oracles */

/* E(a) = sum_i ||y_i - a <a,y_i>|| for a unit direction (dim entries). */
RSUB_API rsub_status rsub_direction_energy(const rsub_points* pts, const double* direction,
                                           double* out_energy);

/* Exhaustive sweep of E over 2D directions (cos t, sin t), t in [0, pi),
 * refined `refinement_rounds` times shrinking the window by
 * `refinement_factor`. */
RSUB_API rsub_status rsub_oracle_direction_2d(const rsub_points* pts, int64_t resolution,
                                              int64_t refinement_rounds,
                                              int64_t refinement_factor, double* out_angle,
                                              double* out_energy);

/* Best line through a pair of data points (2D), trying every pair. */
RSUB_API rsub_status rsub_oracle_line_pairs_2d(const rsub_points* pts, int64_t* out_i,
                                               int64_t* out_j, double* out_energy);

/* Fermat-point vs optimal-line separation for a triangle with all angles
 * below 120 degrees and sides s1 <= s2 < s3. out_passed is 1 when the
 * distance exceeds 10 * tolerance. */
RSUB_API rsub_status rsub_steiner_check(const rsub_points* triangle, double tolerance,
                                        double* out_distance, int* out_passed);

/* Analytic vs central-difference gradient of E at a non-anchor unit
 * direction; returns the max relative error over 10 random tangents. */
RSUB_API rsub_status rsub_fd_gradient_check(const rsub_points* pts, const double* direction,
                                            double increment, uint64_t seed,
                                            double* out_max_rel_error);

/* One-sided derivative of E at the anchor direction sign * y_k/||y_k||
 * along the tangent h: closed form and forward difference. */
RSUB_API rsub_status rsub_one_sided_check(const rsub_points* pts, int64_t anchor_index,
                                          int sign, const double* h, double* out_analytic,
                                          double* out_numeric);

/* Sampled strict-positivity check of the directional derivatives at a unit
 * direction; out_is_strict_min is 1 iff all sampled derivatives are > 0. */
RSUB_API rsub_status rsub_local_min_certificate(const rsub_points* pts,
                                                const double* direction, int64_t samples,
                                                uint64_t seed, int* out_is_strict_min);

#ifdef __cplusplus
}
#endif

#endif /* RSUB_H */
