#ifndef SOLITON_SPECTRA_H
#define SOLITON_SPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_ARGUMENT = 1,
  SS_STATUS_INVALID_ARGUMENT = 2,
  SS_STATUS_DOMAIN_TOO_SMALL = 3,
  SS_STATUS_NOT_CONVERGED = 4,
  SS_STATUS_EIGENSOLVER = 5,
  SS_STATUS_NUMERICAL = 6,
  SS_STATUS_IO = 7,
  SS_STATUS_BUFFER_TOO_SMALL = 8,
  SS_STATUS_CHECKS_FAILED = 9,
  SS_STATUS_PANIC = 10,
} SsStatus;

typedef enum SsEquation {
  SS_EQUATION_NLS = 0,
  SS_EQUATION_DIRAC1D = 1,
} SsEquation;

typedef enum SsVerdict {
  SS_VERDICT_STABLE_SIGN = 0,
  SS_VERDICT_UNSTABLE_SIGN = 1,
  SS_VERDICT_CRITICAL = 2,
} SsVerdict;

typedef struct SsModel SsModel;

typedef struct SsProfile SsProfile;

typedef struct SsSpectrum SsSpectrum;

/**
 * One stability row; fields are NaN or zero when the row failed.
 */
typedef struct SsScanRow {
  double omega;
  double charge;
  double dq_domega;
  size_t real_pair_count;
  double max_real;
  size_t nullspace_dim;
  double half_width;
  enum SsVerdict verdict;
} SsScanRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ss_version(void);

/**
 * Copies the last error of this thread into `buf` (NUL-terminated, truncated
 * to `len`) and returns the full message length without the terminator.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t ss_last_error_message(char *buf, size_t len);

/**
 * `g(s) = m − s^k`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SsStatus ss_model_soler_power(uint32_t k, double m, struct SsModel **out);

/**
 * `g(s) = c₀ + c₁s + …` with `c₀` the mass.
 *
 * # Safety
 * `coefficients` must be valid for `len` reads and `out` for a write.
 */
enum SsStatus ss_model_polynomial(const double *coefficients, size_t len, struct SsModel **out);

/**
 * # Safety
 * `model` must be null or come from an `ss_model_*` constructor.
 */
void ss_model_free(struct SsModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` valid for a write.
 */
enum SsStatus ss_model_g(const struct SsModel *model, double s, double *out);

/**
 * Solves the profile at `omega`. `half_width <= 0` picks the domain from
 * the decay rate.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for a write.
 */
enum SsStatus ss_profile_solve(const struct SsModel *model,
                               enum SsEquation eq,
                               double omega,
                               double half_width,
                               size_t n_points,
                               struct SsProfile **out);

/**
 * # Safety
 * `profile` must be null or come from [`ss_profile_solve`].
 */
void ss_profile_free(struct SsProfile *profile);

/**
 * Grid size and component count.
 *
 * # Safety
 * `profile` must be a live handle; null outputs are skipped.
 */
enum SsStatus ss_profile_shape(const struct SsProfile *profile,
                               size_t *n_points,
                               size_t *components,
                               double *half_width);

/**
 * # Safety
 * `profile` must be a live handle and `buf` valid for `len` writes.
 */
enum SsStatus ss_profile_nodes(const struct SsProfile *profile, double *buf, size_t len);

/**
 * # Safety
 * `profile` must be a live handle and `buf` valid for `len` writes.
 */
enum SsStatus ss_profile_component(const struct SsProfile *profile,
                                   size_t index,
                                   double *buf,
                                   size_t len);

/**
 * Charge `Q` and its slope `dQ/dω` at the profile frequency.
 *
 * # Safety
 * `profile` must be a live handle; null outputs are skipped.
 */
enum SsStatus ss_profile_charge(const struct SsProfile *profile, double *charge, double *dq_domega);

/**
 * Classified spectrum of the linearization at `profile`.
 *
 * # Safety
 * `profile` must be a live handle and `out` valid for a write.
 */
enum SsStatus ss_spectrum_compute(const struct SsProfile *profile, struct SsSpectrum **out);

/**
 * # Safety
 * `spectrum` must be null or come from [`ss_spectrum_compute`].
 */
void ss_spectrum_free(struct SsSpectrum *spectrum);

/**
 * # Safety
 * `spectrum` must be a live handle and `out` valid for a write.
 */
enum SsStatus ss_spectrum_len(const struct SsSpectrum *spectrum, size_t *out);

/**
 * Real and imaginary parts into two buffers of at least `len` values.
 *
 * # Safety
 * `spectrum` must be a live handle; `re` and `im` valid for `len` writes.
 */
enum SsStatus ss_spectrum_eigenvalues(const struct SsSpectrum *spectrum,
                                      double *re,
                                      double *im,
                                      size_t len);

/**
 * Count of localized real eigenvalues (both signs) and the largest one.
 *
 * # Safety
 * `spectrum` must be a live handle; null outputs are skipped.
 */
enum SsStatus ss_spectrum_real_pairs(const struct SsSpectrum *spectrum,
                                     size_t *count,
                                     double *max_real);

/**
 * Full stability row at `omega`. A failed row still fills `out` and returns
 * the failure status.
 *
 * # Safety
 * `model` must be a live handle and `out` valid for a write.
 */
enum SsStatus ss_stability_row(const struct SsModel *model,
                               enum SsEquation eq,
                               double omega,
                               double half_width,
                               size_t n_points,
                               struct SsScanRow *out);

/**
 * Smallest eigenvalue of the static Hessian for `f(ψ) = Σ cᵢψⁱ` (with
 * `c₀ = 0`) on `[−half_width, half_width)`.
 *
 * # Safety
 * `coefficients` must be valid for `len` reads and `out` for a write.
 */
enum SsStatus ss_derrick_lambda_min(const double *coefficients,
                                    size_t len,
                                    double half_width,
                                    size_t n_points,
                                    double *out);

/**
 * Runs a CLI command (`profile`, `spectrum`, `scan`, `virial`, `derrick`,
 * `verify`) on a config file. `output_dir` may be null.
 *
 * # Safety
 * String arguments must be null or NUL-terminated.
 */
enum SsStatus ss_run_command(const char *command, const char *config_path, const char *output_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOLITON_SPECTRA_H */
