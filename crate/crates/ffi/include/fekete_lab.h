#ifndef FEKETE_LAB_H
#define FEKETE_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define FK_MODEL_CP1 0

#define FK_MODEL_CP1XCP1 1

typedef enum FkStatus {
  FK_STATUS_OK = 0,
  FK_STATUS_NULL_POINTER = 1,
  FK_STATUS_INVALID_ARGUMENT = 2,
  FK_STATUS_BUFFER_TOO_SMALL = 3,
  FK_STATUS_MISMATCH = 4,
  FK_STATUS_SINGULAR = 5,
  FK_STATUS_NON_CONVERGENCE = 6,
  FK_STATUS_IO = 7,
  FK_STATUS_PANIC = 8,
} FkStatus;

typedef struct FkConfig FkConfig;

typedef struct FkSection FkSection;

typedef struct FkSpace FkSpace;

typedef struct FkCertificate {
  double log_vdm;
  double max_lagrange_sup;
  double grad_norm;
  bool certified;
} FkCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *fk_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *fk_version(void);

/**
 * Creates the section space `H^0(X, L^k)` for `model` (`FK_MODEL_*`).
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum FkStatus fk_space_new(uint32_t model, uint32_t k, struct FkSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from [`fk_space_new`] not yet freed.
 */
void fk_space_free(struct FkSpace *space);

/**
 * Dimension `N` of the space; 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t fk_space_dim(const struct FkSpace *space);

/**
 * Doubles per point (4 on `CP1`, 8 on `CP1 x CP1`); 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t fk_space_point_len(const struct FkSpace *space);

/**
 * Writes the orthonormal basis at `point` as `N` interleaved complex
 * values (`2N` doubles).
 *
 * # Safety
 * `point` must hold `fk_space_point_len` doubles and `out` `out_len` doubles.
 */
enum FkStatus fk_space_eval_basis(const struct FkSpace *space,
                                  const double *point,
                                  double *out,
                                  size_t out_len);

/**
 * `|K_k(p, q)|` of the Bergman kernel.
 *
 * # Safety
 * `p` and `q` must hold `fk_space_point_len` doubles each.
 */
enum FkStatus fk_space_bergman_norm(const struct FkSpace *space,
                                    const double *p,
                                    const double *q,
                                    double *out);

/**
 * `log |det(B_i(x_j))|` for `n_points` points; `-inf` when singular.
 *
 * # Safety
 * `points` must hold `n_points * fk_space_point_len` doubles.
 */
enum FkStatus fk_space_vandermonde_lognorm(const struct FkSpace *space,
                                           const double *points,
                                           size_t n_points,
                                           double *out);

/**
 * Solves for a Fekete configuration. `starts == 0` selects the default
 * number of random starts.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FkStatus fk_fekete_solve(const struct FkSpace *space,
                              uint64_t seed,
                              uint32_t starts,
                              struct FkConfig **out);

/**
 * Builds a configuration from given points and evaluates its certificate.
 *
 * # Safety
 * `points` must hold `fk_space_dim * fk_space_point_len` doubles.
 */
enum FkStatus fk_config_from_points(const struct FkSpace *space,
                                    const double *points,
                                    struct FkConfig **out);

/**
 * # Safety
 * `config` must be null or a handle not yet freed.
 */
void fk_config_free(struct FkConfig *config);

/**
 * Number of points; 0 for a null handle.
 *
 * # Safety
 * `config` must be null or a live handle.
 */
size_t fk_config_num_points(const struct FkConfig *config);

/**
 * Copies the points into `out` (`num_points * point_len` doubles).
 *
 * # Safety
 * `out` must be valid for `out_len` doubles.
 */
enum FkStatus fk_config_points(const struct FkConfig *config, double *out, size_t out_len);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum FkStatus fk_config_certificate(const struct FkConfig *config, struct FkCertificate *out);

/**
 * Lebesgue constant `max_x sum_j |l_j(x)|` of the configuration.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FkStatus fk_config_lebesgue(const struct FkConfig *config, double *out);

/**
 * The `j`-th Lagrange section of the configuration.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FkStatus fk_section_lagrange(const struct FkConfig *config, size_t j, struct FkSection **out);

/**
 * Draw `trial` of the Gaussian ensemble seeded with `seed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FkStatus fk_section_gaussian(const struct FkSpace *space,
                                  uint64_t seed,
                                  uint64_t trial,
                                  struct FkSection **out);

/**
 * # Safety
 * `section` must be null or a handle not yet freed.
 */
void fk_section_free(struct FkSection *section);

/**
 * Pointwise norm `|s(p)|`.
 *
 * # Safety
 * `point` must hold `fk_space_point_len` doubles of the section's space.
 */
enum FkStatus fk_section_eval_norm(const struct FkSection *section,
                                   const double *point,
                                   double *out);

/**
 * Sup-norm `max_X |s|` by grid search and local refinement.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FkStatus fk_section_sup_norm(const struct FkSection *section, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FEKETE_LAB_H */
