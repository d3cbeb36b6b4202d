#ifndef PSIPARAM_H
#define PSIPARAM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum PsiStatus {
  PSI_STATUS_OK = 0,
  PSI_STATUS_NULL_POINTER = 1,
  PSI_STATUS_RANGE = 2,
  PSI_STATUS_DIMENSION = 3,
  PSI_STATUS_NORMALIZATION = 4,
  PSI_STATUS_INVALID_DISTRIBUTION = 5,
  PSI_STATUS_VALIDITY = 6,
  PSI_STATUS_DEGENERATE_CONDITIONAL = 7,
  PSI_STATUS_ALGEBRA = 8,
  PSI_STATUS_CONSISTENCY = 9,
  PSI_STATUS_BUFFER_TOO_SMALL = 10,
  PSI_STATUS_PANIC = 99,
} PsiStatus;

/**
 * Density matrix handle.
 */
typedef struct PsiDensity PsiDensity;

/**
 * Probability distribution handle.
 */
typedef struct PsiProbDist PsiProbDist;

/**
 * Orthogonal or unitary transform handle.
 */
typedef struct PsiTransform PsiTransform;

/**
 * Wave-function handle (real, complex or quaternionic).
 */
typedef struct PsiWaveFunction PsiWaveFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *psi_last_error(void);

/**
 * Validates `p[0..n]` as a distribution.
 *
 * # Safety
 * `p` must point to `n` readable doubles and `out` to a writable handle slot.
 */
enum PsiStatus psi_probdist_new(const double *p, size_t n, struct PsiProbDist **out);

/**
 * # Safety
 * `dist` must be null or a handle from this library, not yet freed.
 */
void psi_probdist_free(struct PsiProbDist *dist);

/**
 * Number of outcomes, 0 for a null handle.
 *
 * # Safety
 * `dist` must be null or a live handle.
 */
size_t psi_probdist_len(const struct PsiProbDist *dist);

/**
 * Copies the probabilities into `out[0..capacity]`.
 *
 * # Safety
 * `dist` must be a live handle and `out` must hold `capacity` doubles.
 */
enum PsiStatus psi_probdist_values(const struct PsiProbDist *dist, double *out, size_t capacity);

/**
 * Canonical Euler angles, `len(dist) − 1` values, written to `theta`.
 *
 * # Safety
 * `dist` must be a live handle and `theta` must hold `capacity` doubles.
 */
enum PsiStatus psi_encode(const struct PsiProbDist *dist, double *theta, size_t capacity);

/**
 * Real wave-function of the angles `theta[0..n]` (dimension `n + 1`).
 *
 * # Safety
 * `theta` must point to `n` doubles and `out` to a writable handle slot.
 */
enum PsiStatus psi_angles_to_wavefunction(const double *theta,
                                          size_t n,
                                          struct PsiWaveFunction **out);

/**
 * `ψ_n = √p_n`.
 *
 * # Safety
 * `dist` must be a live handle and `out` a writable handle slot.
 */
enum PsiStatus psi_sqrt_encode(const struct PsiProbDist *dist, struct PsiWaveFunction **out);

/**
 * Wave-function from flat real coordinates, `block_dim` (1, 2 or 4) per
 * amplitude.
 *
 * # Safety
 * `coords` must point to `n_coords` doubles and `out` to a writable slot.
 */
enum PsiStatus psi_wavefunction_new(uint32_t block_dim,
                                    const double *coords,
                                    size_t n_coords,
                                    struct PsiWaveFunction **out);

/**
 * # Safety
 * `psi` must be null or a live handle.
 */
void psi_wavefunction_free(struct PsiWaveFunction *psi);

/**
 * Number of amplitudes, 0 for a null handle.
 *
 * # Safety
 * `psi` must be null or a live handle.
 */
size_t psi_wavefunction_len(const struct PsiWaveFunction *psi);

/**
 * Number of real coordinates, `len × block_dim`.
 *
 * # Safety
 * `psi` must be null or a live handle.
 */
size_t psi_wavefunction_coord_count(const struct PsiWaveFunction *psi);

/**
 * Copies the flat real coordinates into `out`.
 *
 * # Safety
 * `psi` must be a live handle and `out` must hold `capacity` doubles.
 */
enum PsiStatus psi_wavefunction_coords(const struct PsiWaveFunction *psi,
                                       double *out,
                                       size_t capacity);

/**
 * Born rule `p_n = |ψ_n|²` for any of the three algebras.
 *
 * # Safety
 * `psi` must be a live handle and `out` a writable handle slot.
 */
enum PsiStatus psi_born_decode(const struct PsiWaveFunction *psi, struct PsiProbDist **out);

/**
 * `ρ = ψψ†`.
 *
 * # Safety
 * `psi` must be a live handle and `out` a writable handle slot.
 */
enum PsiStatus psi_pure_density(const struct PsiWaveFunction *psi, struct PsiDensity **out);

/**
 * Diagonal part of `rho`.
 *
 * # Safety
 * `rho` must be a live handle and `out` a writable handle slot.
 */
enum PsiStatus psi_collapse(const struct PsiDensity *rho, struct PsiDensity **out);

/**
 * # Safety
 * `rho` must be null or a live handle.
 */
void psi_density_free(struct PsiDensity *rho);

/**
 * Matrix dimension, 0 for a null handle.
 *
 * # Safety
 * `rho` must be null or a live handle.
 */
size_t psi_density_dim(const struct PsiDensity *rho);

/**
 * Real parts of the diagonal entries.
 *
 * # Safety
 * `rho` must be a live handle and `out` must hold `capacity` doubles.
 */
enum PsiStatus psi_density_diagonal(const struct PsiDensity *rho, double *out, size_t capacity);

/**
 * Real orthogonal transform from a row-major `n × n` matrix.
 *
 * # Safety
 * `matrix` must point to `n * n` doubles and `out` to a writable slot.
 */
enum PsiStatus psi_transform_new_real(const double *matrix, size_t n, struct PsiTransform **out);

/**
 * The 2-D rotation taking `(1, 0)` to `(cos a, sin a)`.
 *
 * # Safety
 * `out` must be a writable handle slot.
 */
enum PsiStatus psi_clock_rotation(double a, struct PsiTransform **out);

/**
 * Unitary discrete Fourier transform of dimension `n`.
 *
 * # Safety
 * `out` must be a writable handle slot.
 */
enum PsiStatus psi_transform_fourier(size_t n, struct PsiTransform **out);

/**
 * # Safety
 * `u` must be null or a live handle.
 */
void psi_transform_free(struct PsiTransform *u);

/**
 * Whether `u` maps events to events. `witness` receives the 1-based
 * elementary event that fails, or 0.
 *
 * # Safety
 * `u` must be a live handle; `deterministic` and `witness` writable.
 */
enum PsiStatus psi_is_deterministic(const struct PsiTransform *u,
                                    bool *deterministic,
                                    size_t *witness);

/**
 * `U·ψ`.
 *
 * # Safety
 * `u` and `psi` must be live handles and `out` a writable slot.
 */
enum PsiStatus psi_transform_apply(const struct PsiTransform *u,
                                   const struct PsiWaveFunction *psi,
                                   struct PsiWaveFunction **out);

/**
 * Best pure 2-D state on a grid of `grid` angles for the two targets.
 *
 * # Safety
 * `theta_best` and `residual` must be writable.
 */
enum PsiStatus psi_gleason_pure_search(double target_a,
                                       double target_b,
                                       size_t grid,
                                       double *theta_best,
                                       double *residual);

/**
 * Distribution over the `2^steps` paths (first step most significant,
 * down = 0). `q` holds one up-probability or one per step.
 *
 * # Safety
 * `q` must point to `n_q` doubles and `out` to a writable slot.
 */
enum PsiStatus psi_walk_paths(size_t steps, const double *q, size_t n_q, struct PsiProbDist **out);

/**
 * Position distribution after `t` steps, over `−t, −t+2, …, t`.
 *
 * # Safety
 * `q` must point to `n_q` doubles and `out` to a writable slot.
 */
enum PsiStatus psi_walk_marginal(size_t steps,
                                 const double *q,
                                 size_t n_q,
                                 size_t t,
                                 struct PsiProbDist **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSIPARAM_H */
