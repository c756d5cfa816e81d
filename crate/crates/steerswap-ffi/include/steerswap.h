#ifndef STEERSWAP_H
#define STEERSWAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum SteerswapStatus {
  STEERSWAP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  STEERSWAP_STATUS_NULL_POINTER = 1,
  /**
   * A parameter was outside its documented domain.
   */
  STEERSWAP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The optimal D'->A gain is undefined for an unsqueezed resource.
   */
  STEERSWAP_STATUS_DEGENERATE_RESOURCE = 3,
  /**
   * A covariance matrix violated the uncertainty principle.
   */
  STEERSWAP_STATUS_UNPHYSICAL = 4,
  /**
   * The closed-form/simulator equivalence check found a mismatch.
   */
  STEERSWAP_STATUS_VERIFY_FAILED = 5,
} SteerswapStatus;

/**
 * Feedforward gain policy selector for [`steerswap_config_new`].
 */
typedef enum SteerswapGainMode {
  STEERSWAP_GAIN_MODE_UNIT = 0,
  STEERSWAP_GAIN_MODE_OPTIMAL_A_TO_D = 1,
  STEERSWAP_GAIN_MODE_OPTIMAL_D_TO_A = 2,
  /**
   * Uses the `fixed_gain` argument.
   */
  STEERSWAP_GAIN_MODE_FIXED = 3,
} SteerswapGainMode;

/**
 * Steering classification written by [`steerswap_steering`].
 */
typedef enum SteerswapRegion {
  STEERSWAP_REGION_TWO_WAY = 0,
  STEERSWAP_REGION_ONE_WAY_AB = 1,
  STEERSWAP_REGION_ONE_WAY_BA = 2,
  STEERSWAP_REGION_NO_STEERING = 3,
} SteerswapRegion;

/**
 * Opaque protocol configuration handle.
 */
typedef struct SteerswapConfig SteerswapConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Nul-terminated semantic version of this library.
 */
const char *steerswap_version(void);

/**
 * Creates a configuration handle and writes it to `out`.
 *
 * `r` is the resource squeezing parameter, `t1`/`w1` and `t2`/`w2` the
 * transmittance and excess noise of the two channels, `eta` the
 * joint-measurement detection efficiency. `fixed_gain` is read only when
 * `gain_mode` is `FIXED` (pass a `SteerswapGainMode` value).
 *
 * On success the caller owns the handle and must release it with
 * `steerswap_config_free`.
 *
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
enum SteerswapStatus steerswap_config_new(double r,
                                          double t1,
                                          double w1,
                                          double t2,
                                          double w2,
                                          double eta,
                                          int32_t gain_mode,
                                          double fixed_gain,
                                          struct SteerswapConfig **out);

/**
 * Releases a handle created by `steerswap_config_new`; null is a no-op.
 *
 * # Safety
 * `cfg` must be null or a pointer returned by `steerswap_config_new`
 * that has not been freed already.
 */
void steerswap_config_free(struct SteerswapConfig *cfg);

/**
 * Resolves the configured gain policy to a numeric feedforward gain.
 *
 * # Safety
 * `cfg` must be a live handle; `gain` must be a valid writable pointer.
 */
enum SteerswapStatus steerswap_resolve_gain(const struct SteerswapConfig *cfg, double *gain);

/**
 * Writes the closed-form output covariance elements `a`, `b`, `c` of the
 * swapped pair (A, D').
 *
 * # Safety
 * `cfg` must be a live handle; `a`, `b`, `c` must be valid writable
 * pointers.
 */
enum SteerswapStatus steerswap_output_covariance(const struct SteerswapConfig *cfg,
                                                 double *a,
                                                 double *b,
                                                 double *c);

/**
 * Writes both steerabilities of the swapped pair (nats) and the region
 * classification (a `SteerswapRegion` value).
 *
 * # Safety
 * `cfg` must be a live handle; `g_ab`, `g_ba`, `region` must be valid
 * writable pointers.
 */
enum SteerswapStatus steerswap_steering(const struct SteerswapConfig *cfg,
                                        double *g_ab,
                                        double *g_ba,
                                        int32_t *region);

/**
 * Writes the steerability of the bare two-mode squeezed resource at
 * squeezing `r` (equal in both directions).
 *
 * # Safety
 * `out` must be a valid writable pointer.
 */
enum SteerswapStatus steerswap_resource_steerability(double r, double *out);

/**
 * Runs the closed-form/simulator equivalence check on `cases` seeded
 * random configurations and writes the worst per-element difference.
 * Returns `VERIFY_FAILED` if any case exceeds the 1e-10 bound.
 *
 * # Safety
 * `max_delta` must be a valid writable pointer.
 */
enum SteerswapStatus steerswap_run_equivalence(uint64_t seed, uint64_t cases, double *max_delta);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEERSWAP_H */
