#ifndef FLAMEFRONT_H
#define FLAMEFRONT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Velocity closure selector, passed as a plain integer.
 */
#define FF_MODEL_LINEAR 0

#define FF_MODEL_NONLINEAR 1

/**
 * Status codes returned by every fallible function.
 */
typedef enum FfStatus {
  FF_STATUS_OK = 0,
  FF_STATUS_NULL_POINTER = 1,
  FF_STATUS_INVALID_ARGUMENT = 2,
  FF_STATUS_DEGENERATE_FRONT = 3,
  FF_STATUS_NO_CONVERGENCE = 4,
  FF_STATUS_SINGULAR_SYSTEM = 5,
  FF_STATUS_BRANCH_START = 6,
  FF_STATUS_UNSUPPORTED_MODEL = 7,
  FF_STATUS_BLOW_UP = 8,
  FF_STATUS_BUFFER_TOO_SMALL = 9,
  FF_STATUS_INTERNAL = 10,
} FfStatus;

typedef enum FfTermination {
  FF_TERMINATION_SELF_INTERSECTION = 0,
  FF_TERMINATION_ALPHA_THRESHOLD = 1,
  FF_TERMINATION_ITERATION_FAILURE = 2,
  FF_TERMINATION_MAX_AMPLITUDE_REACHED = 3,
} FfTermination;

/**
 * Opaque wave branch.
 */
typedef struct FfBranch FfBranch;

/**
 * Opaque traveling wave.
 */
typedef struct FfWave FfWave;

/**
 * Scalar data of a wave.
 */
typedef struct FfWaveInfo {
  double alpha;
  double beta;
  double length;
  double amplitude;
  double residual_norm;
  size_t nx;
  uint32_t k0;
  size_t iterations;
} FfWaveInfo;

typedef struct FfGrowth {
  double rate;
  double intercept;
  double window_start;
  double window_end;
  bool unstable_observed;
} FfGrowth;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length including the NUL,
 * or 0 when there is no message.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t ff_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ff_version(void);

/**
 * Bifurcation point `α₀` of mode `k0` for the given closure.
 *
 * # Safety
 * `alpha0` must be null or valid for writes.
 */
enum FfStatus ff_bifurcation_alpha(uint32_t model_code, uint32_t k0, double *alpha0);

/**
 * Solves the small wave of amplitude `h` (at most 0.3) on the branch of
 * mode `k0`, on `nx` grid points.
 *
 * # Safety
 * `wave` must be null or valid for writes.
 */
enum FfStatus ff_wave_solve(uint32_t model_code,
                            uint32_t k0,
                            double h,
                            size_t nx,
                            struct FfWave **wave);

/**
 * # Safety
 * `wave` must be null or a handle from this library that is not used again.
 */
void ff_wave_free(struct FfWave *wave);

/**
 * # Safety
 * `wave` must be a live handle; `info` must be null or valid for writes.
 */
enum FfStatus ff_wave_info(const struct FfWave *wave, struct FfWaveInfo *info);

/**
 * Copies the `nx` grid values of `θ` into `buf`.
 *
 * # Safety
 * `wave` must be a live handle; `buf` must be valid for `len` doubles.
 */
enum FfStatus ff_wave_theta(const struct FfWave *wave, double *buf, size_t len);

/**
 * Continues the branch of mode `k0` in amplitude steps `h_step` up to
 * `h_max`.
 *
 * # Safety
 * `branch` must be null or valid for writes.
 */
enum FfStatus ff_branch_continue(uint32_t model_code,
                                 uint32_t k0,
                                 double h_step,
                                 double h_max,
                                 size_t nx,
                                 struct FfBranch **branch);

/**
 * # Safety
 * `branch` must be null or a handle from this library that is not used again.
 */
void ff_branch_free(struct FfBranch *branch);

/**
 * Number of waves on the branch; 0 for a null handle.
 *
 * # Safety
 * `branch` must be null or a live handle.
 */
size_t ff_branch_len(const struct FfBranch *branch);

/**
 * # Safety
 * `branch` must be a live handle; `reason` must be null or valid for writes.
 */
enum FfStatus ff_branch_termination(const struct FfBranch *branch, enum FfTermination *reason);

/**
 * Copies wave `index` of the branch into a new handle.
 *
 * # Safety
 * `branch` must be a live handle; `wave` must be null or valid for writes.
 */
enum FfStatus ff_branch_wave(const struct FfBranch *branch, size_t index, struct FfWave **wave);

/**
 * Growth rate of the wave under the perturbation `δ(sin σ + sin 2σ)`.
 *
 * # Safety
 * `wave` must be a live handle; `growth` must be null or valid for writes.
 */
enum FfStatus ff_stability_probe(const struct FfWave *wave,
                                 double delta,
                                 double dt,
                                 double t_max,
                                 struct FfGrowth *growth);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLAMEFRONT_H */
