#ifndef CSFLAB_H
#define CSFLAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CsfStatus {
  CSF_STATUS_OK = 0,
  CSF_STATUS_NULL_POINTER = 1,
  CSF_STATUS_INVALID_ARGUMENT = 2,
  CSF_STATUS_DEGENERATE_CURVE = 3,
  CSF_STATUS_NOT_EMBEDDED = 4,
  CSF_STATUS_INVALID_PAIR = 5,
  CSF_STATUS_RESAMPLE_FAILURE = 6,
  CSF_STATUS_SELF_INTERSECTION = 7,
  CSF_STATUS_NUMERICAL_BLOWUP = 8,
  CSF_STATUS_DOMAIN_ERROR = 9,
  CSF_STATUS_WRONG_RUN_KIND = 10,
  CSF_STATUS_CONFIG_ERROR = 11,
  CSF_STATUS_GENERATION_FAILURE = 12,
  CSF_STATUS_PARSE_ERROR = 13,
  CSF_STATUS_IO_ERROR = 14,
  CSF_STATUS_BUFFER_TOO_SMALL = 15,
  CSF_STATUS_PANIC = 99,
} CsfStatus;

/**
 * Why a run stopped.
 */
typedef enum CsfTermination {
  CSF_TERMINATION_REACHED_END = 0,
  CSF_TERMINATION_SELF_INTERSECTION = 1,
  CSF_TERMINATION_CURVATURE_BLOWUP = 2,
  CSF_TERMINATION_STEP_FAILURE = 3,
} CsfTermination;

/**
 * A closed, positively oriented polygon.
 */
typedef struct CsfCurve CsfCurve;

/**
 * The snapshots of one run.
 */
typedef struct CsfTrajectory CsfTrajectory;

/**
 * Chord-ratio profile of a curve scaled to length 2π.
 */
typedef struct CsfProfile {
  double a_bar;
  /**
   * log ā; −∞ when `round`.
   */
  double t_bar;
  /**
   * ā = 0: the bound reduces to d ≥ 2 sin(ℓ/2).
   */
  bool round;
  double diagonal_max;
  double off_diagonal_max;
  /**
   * Vertex indices of the maximizing pair (equal for a diagonal value),
   * or −1 when there is none.
   */
  int64_t argmax_i;
  int64_t argmax_j;
} CsfProfile;

/**
 * Flow configuration. Fill with [`csf_flow_config_default`] and edit.
 */
typedef struct CsfFlowConfig {
  /**
   * True: length-normalized flow (time t); false: plain flow (time τ).
   */
  bool normalized;
  size_t n;
  /**
   * True selects the explicit scheme, false the semi-implicit one.
   */
  bool explicit_scheme;
  /**
   * Fixed step, or the cap of the adaptive policy.
   */
  double dt;
  /**
   * Safety factor c of dt = min(dt, c / k_max²); 0 means fixed steps.
   */
  double adaptive_c;
  double t_end;
  size_t resample_every;
  size_t snapshot_every;
  size_t embed_check_every;
} CsfFlowConfig;

/**
 * Outcome of the hard checks on a normalized trajectory.
 */
typedef struct CsfChecks {
  bool distance_comparison;
  /**
   * Smallest Z over all snapshots and pairs.
   */
  double min_z;
  bool abar_decay;
  bool curvature_bound;
  bool l2_bound;
  /**
   * max |∫(k−1)² ds − (∫k² ds − 4π + L)| over the snapshots.
   */
  double identity_residual;
} CsfChecks;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *csf_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes of writes.
 */
size_t csf_last_error_message(char *buf, size_t len);

/**
 * Builds a curve from `n` interleaved `x, y` pairs. Clockwise input is
 * reversed.
 *
 * # Safety
 * `xy` must point to `2 n` doubles; `out_curve` must be valid for writes.
 */
enum CsfStatus csf_curve_from_xy(const double *xy, size_t n, struct CsfCurve **out_curve);

/**
 * Runs a named generator (`circle`, `ellipse`, `dumbbell`, `fourier`)
 * with `count` numeric parameters given as parallel key and value arrays.
 *
 * # Safety
 * `name` and every key must be NUL-terminated strings; `keys` and
 * `values` must hold `count` entries (they may be null when `count` is 0).
 */
enum CsfStatus csf_curve_generate(const char *name,
                                  const char *const *keys,
                                  const double *values,
                                  size_t count,
                                  struct CsfCurve **out_curve);

/**
 * Releases a curve; null is ignored.
 *
 * # Safety
 * `curve` must be null or a handle from this library not yet freed.
 */
void csf_curve_free(struct CsfCurve *curve);

/**
 * Vertex count, or 0 for null.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
size_t csf_curve_len(const struct CsfCurve *curve);

/**
 * Copies the vertices as interleaved `x, y` into `xy`, which must hold
 * `2 · len` doubles (`capacity` counts doubles).
 *
 * # Safety
 * `curve` must be live; `xy` must be valid for `capacity` writes.
 */
enum CsfStatus csf_curve_vertices(const struct CsfCurve *curve, double *xy, size_t capacity);

/**
 * Polygon perimeter, or NaN for null.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
double csf_curve_length(const struct CsfCurve *curve);

/**
 * Writes whether the polygon is free of self-intersections.
 *
 * # Safety
 * `curve` must be live; `embedded` must be valid for writes.
 */
enum CsfStatus csf_curve_is_embedded(const struct CsfCurve *curve, bool *embedded);

/**
 * Profile of the curve after scaling it to length 2π.
 *
 * # Safety
 * `curve` must be live; `result` must be valid for writes.
 */
enum CsfStatus csf_curve_profile(const struct CsfCurve *curve, struct CsfProfile *result);

/**
 * f(x, t) = 2eᵗ arctan(e⁻ᵗ sin(x/2)) for x in [0, 2π].
 *
 * # Safety
 * `value` must be valid for writes.
 */
enum CsfStatus csf_f_eval(double x, double t, double *value);

/**
 * The chord ratio a with d = f(ℓ, −log a), 0 < d ≤ ℓ ≤ π.
 *
 * # Safety
 * `a` must be valid for writes.
 */
enum CsfStatus csf_a_solve(double d, double l, double *a);

/**
 * Writes the default configuration: normalized, N = 512, semi-implicit,
 * dt = 1e−3, t_end = 6, resample every 20 steps, snapshot and check
 * every 10.
 *
 * # Safety
 * `config` must be valid for writes.
 */
enum CsfStatus csf_flow_config_default(struct CsfFlowConfig *config);

/**
 * Runs the flow. A run that stops early still succeeds; inspect
 * [`csf_trajectory_termination`].
 *
 * # Safety
 * `curve` and `config` must be valid; `out_traj` must be valid for writes.
 */
enum CsfStatus csf_run(const struct CsfCurve *curve,
                       const struct CsfFlowConfig *config,
                       struct CsfTrajectory **out_traj);

/**
 * Releases a trajectory; null is ignored.
 *
 * # Safety
 * `traj` must be null or a handle from this library not yet freed.
 */
void csf_trajectory_free(struct CsfTrajectory *traj);

/**
 * Number of snapshots, or 0 for null.
 *
 * # Safety
 * `traj` must be null or a live handle.
 */
size_t csf_trajectory_len(const struct CsfTrajectory *traj);

/**
 * # Safety
 * `traj` must be a live handle.
 */
enum CsfTermination csf_trajectory_termination(const struct CsfTrajectory *traj);

/**
 * Time stamp and a copy of the curve of snapshot `index`; `out_curve`
 * may be null when only the time is wanted.
 *
 * # Safety
 * `traj` must be live; `time` must be valid for writes; `out_curve` must
 * be null or valid for writes.
 */
enum CsfStatus csf_trajectory_snapshot(const struct CsfTrajectory *traj,
                                       size_t index,
                                       double *time,
                                       struct CsfCurve **out_curve);

/**
 * Distance comparison, ā decay, curvature bound and L² bound on a
 * normalized trajectory, with t̄ from its first snapshot.
 *
 * # Safety
 * `traj` must be live; `result` must be valid for writes.
 */
enum CsfStatus csf_trajectory_check(const struct CsfTrajectory *traj, struct CsfChecks *result);

/**
 * Runs the identity suite on a `grid_x × grid_t` grid; `pass` receives
 * whether every identity held.
 *
 * # Safety
 * `pass` must be valid for writes.
 */
enum CsfStatus csf_verify_identities(size_t grid_x, size_t grid_t, bool *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSFLAB_H */
