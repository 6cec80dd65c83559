/* C interface for the distframe distribution-frame library. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum DfStatus {
  DfOk = 0,
  DfNullArgument = 1,
  DfInvalidArgument = 2,
  DfBadDomain = 3,
  DfDimensionMismatch = 4,
  DfInadequateGrid = 5,
  DfNotAFrame = 6,
  DfNotGelfand = 7,
  DfNumericError = 8,
  DfIoError = 9,
  DfParseError = 10,
  DfUtf8Error = 11,
  DfPanic = 12,
} DfStatus;

/**
 * Opaque quadrature grid handle.
 */
typedef struct DfGrid DfGrid;

/**
 * Opaque distribution map handle.
 */
typedef struct DfMap DfMap;

/**
 * Opaque test space handle.
 */
typedef struct DfSpace DfSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *df_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned through a `char**` out
 * parameter of this library, not yet freed. NULL is ignored.
 */
void df_string_free(char *s);

/**
 * Creates an N-dimensional Hermite test space.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum DfStatus df_space_new(size_t n, struct DfSpace **out);

/**
 * # Safety
 * `space` must come from `df_space_new` and not be freed twice.
 */
void df_space_free(struct DfSpace *space);

/**
 * Builds a quadrature grid. `a` and `b` are ignored by the
 * gauss_hermite_lebesgue kind.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum DfStatus df_grid_new(int kind, size_t m, double a, double b, struct DfGrid **out);

/**
 * The default (square Gauss-Hermite) grid for a builtin kernel on the
 * given space.
 *
 * # Safety
 * `space` must be a live handle; `out` valid for writing one pointer.
 */
enum DfStatus df_grid_auto(const struct DfSpace *space, int builtin_kind, struct DfGrid **out);

/**
 * Number of grid nodes; 0 for a null handle.
 *
 * # Safety
 * `grid` must be a live handle or NULL.
 */
size_t df_grid_len(const struct DfGrid *grid);

/**
 * # Safety
 * `grid` must come from a grid constructor and not be freed twice.
 */
void df_grid_free(struct DfGrid *grid);

/**
 * Builds one of the built-in kernels (0=fourier, 1=delta,
 * 2=weighted_fourier) on the given space and grid.
 *
 * # Safety
 * `space` and `grid` must be live handles; `out` valid for one pointer.
 */
enum DfStatus df_map_builtin(int kind,
                             const struct DfSpace *space,
                             const struct DfGrid *grid,
                             struct DfMap **out);

/**
 * Reads a pairing CSV file into a map over the given space and grid.
 *
 * # Safety
 * `path` must be a NUL-terminated string; handles live; `out` writable.
 */
enum DfStatus df_map_from_csv_file(const char *path,
                                   const struct DfSpace *space,
                                   const struct DfGrid *grid,
                                   struct DfMap **out);

/**
 * Writes a map's pairing matrix to a CSV file.
 *
 * # Safety
 * `map` must be a live handle; `path` a NUL-terminated string.
 */
enum DfStatus df_map_to_csv_file(const struct DfMap *map, const char *path);

/**
 * Transforms a map through an operator given by its adjoint's matrix in
 * row-major split real/imaginary arrays of length n*n (n = space dim).
 *
 * # Safety
 * `map` live; `entries_re`/`entries_im` must point to n*n doubles each;
 * `out` writable.
 */
enum DfStatus df_map_transform(const struct DfMap *map,
                               const double *entries_re,
                               const double *entries_im,
                               size_t n,
                               struct DfMap **out);

/**
 * Copy of the map with one pairing row zeroed.
 *
 * # Safety
 * `map` live; `out` writable.
 */
enum DfStatus df_map_zero_row(const struct DfMap *map, size_t row, struct DfMap **out);

/**
 * # Safety
 * `map` must come from a map constructor and not be freed twice.
 */
void df_map_free(struct DfMap *map);

/**
 * Lower and upper frame bounds (spectral extremes of the frame operator).
 *
 * # Safety
 * `map` live; `lower` and `upper` must be writable doubles.
 */
enum DfStatus df_frame_bounds(const struct DfMap *map, double *lower, double *upper);

/**
 * Classification report as JSON (default tolerances). Free the string
 * with `df_string_free`.
 *
 * # Safety
 * `map` live; `out_json` valid for writing one pointer.
 */
enum DfStatus df_classify_json(const struct DfMap *map, char **out_json);

/**
 * Canonical dual map; fails with DfNotAFrame when the lower bound sits
 * under the frame floor.
 *
 * # Safety
 * `map` live; `out` writable.
 */
enum DfStatus df_canonical_dual(const struct DfMap *map, struct DfMap **out);

/**
 * Spectral distance of the mixed Gram of (omega, theta) from the
 * identity.
 *
 * # Safety
 * Both maps live; `out` a writable double.
 */
enum DfStatus df_reconstruction_residual(const struct DfMap *omega,
                                         const struct DfMap *theta,
                                         double *out);

/**
 * Compatibility report for the pair (theta, omega) as JSON.
 *
 * # Safety
 * Both maps live; `out_json` writable.
 */
enum DfStatus df_pair_report_json(const struct DfMap *theta,
                                  const struct DfMap *omega,
                                  char **out_json);

/**
 * Frame-bound sweep of a builtin kernel over ascending sizes, as JSON.
 *
 * # Safety
 * `sizes` must point to `n_sizes` usize values; `out_json` writable.
 */
enum DfStatus df_sweep_json(int builtin_kind, const size_t *sizes, size_t n_sizes, char **out_json);

/**
 * Random-map oracle cross-check; writes the worst deviations observed.
 *
 * # Safety
 * `frame_deviation` and `adjoint_deviation` must be writable doubles.
 */
enum DfStatus df_oracle_check(size_t count,
                              uint64_t seed,
                              size_t max_dim,
                              double *frame_deviation,
                              double *adjoint_deviation);

/**
 * Runs a scenario file, writing its report and side files into
 * `out_dir`, and returns the run report as JSON.
 *
 * # Safety
 * `path` and `out_dir` NUL-terminated strings; `out_json` writable.
 */
enum DfStatus df_run_scenario(const char *path, const char *out_dir, char **out_json);

/**
 * Builds the atomic map of the operator whose adjoint matrix is supplied
 * (split real/imaginary, row-major n*n), certifying that the base map is
 * a Gel'fand basis.
 *
 * # Safety
 * Same contracts as `df_map_transform`.
 */
enum DfStatus df_atomic_map(const struct DfMap *zeta,
                            const double *a_re,
                            const double *a_im,
                            size_t n,
                            struct DfMap **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
