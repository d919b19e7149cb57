#ifndef SCATTER_H
#define SCATTER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ScatterStatus {
  SCATTER_STATUS_OK = 0,
  // A required pointer argument was null.
  SCATTER_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  SCATTER_STATUS_UTF8 = 2,
  SCATTER_STATUS_CONFIG = 3,
  SCATTER_STATUS_PARSE = 4,
  SCATTER_STATUS_IO = 5,
  SCATTER_STATUS_INVALID_INPUT = 6,
  // The computation failed or could not be resolved.
  SCATTER_STATUS_NUMERICAL = 7,
  // An output buffer is smaller than required.
  SCATTER_STATUS_BUFFER_TOO_SMALL = 8,
  SCATTER_STATUS_PANIC = 9,
} ScatterStatus;

// Run configuration.
typedef struct ScatterConfig ScatterConfig;

// Scattering data together with its two backgrounds.
typedef struct ScatterData ScatterData;

// Potentials reconstructed from both sides on a common grid.
typedef struct ScatterReconstruction ScatterReconstruction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static string.
const char *scatter_version(void);

// Message of the last failure on this thread, or null. Valid until the next
// failing call on the same thread.
const char *scatter_last_error(void);

// Parses configuration text. Relative file names resolve against
// `base_dir`, or the working directory when it is null.
//
// # Safety
// `config_text` and a non-null `base_dir` must be NUL-terminated strings; `out`
// must be writable.
enum ScatterStatus scatter_config_parse(const char *config_text,
                                        const char *base_dir,
                                        struct ScatterConfig **out);

// Loads a configuration file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum ScatterStatus scatter_config_load(const char *path, struct ScatterConfig **out);

// # Safety
// `cfg` must be null or a handle from this library, not yet freed.
void scatter_config_free(struct ScatterConfig *cfg);

// Solves the direct problem for the configured potential.
//
// # Safety
// `cfg` must be a live handle; `out` must be writable.
enum ScatterStatus scatter_direct(const struct ScatterConfig *cfg, struct ScatterData **out);

// Reads a scattering-data JSON file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum ScatterStatus scatter_data_load(const char *path, struct ScatterData **out);

// Writes scattering data as canonical JSON.
//
// # Safety
// `data` must be a live handle; `path` a NUL-terminated string.
enum ScatterStatus scatter_data_save(const struct ScatterData *data, const char *path);

// # Safety
// `data` must be null or a handle from this library, not yet freed.
void scatter_data_free(struct ScatterData *data);

// Number of eigenvalues; 0 for a null handle.
//
// # Safety
// `data` must be null or a live handle.
size_t scatter_data_eigenvalue_count(const struct ScatterData *data);

// Eigenvalue `k` (ascending) and its norming constants. Null outputs are skipped.
//
// # Safety
// `data` must be a live handle; non-null outputs must be writable.
enum ScatterStatus scatter_data_bound_state(const struct ScatterData *data,
                                            size_t k,
                                            double *lambda,
                                            double *gamma_plus,
                                            double *gamma_minus);

// Evaluates the necessary conditions on the data at tolerance `tol` and
// stores the number of violated ones in `failed`.
//
// # Safety
// `data` must be a live handle; `failed` must be writable.
enum ScatterStatus scatter_data_check(const struct ScatterData *data, double tol, size_t *failed);

// Reconstructs the potential from both sides over the configured window.
//
// # Safety
// `data` and `cfg` must be live handles; `out` must be writable.
enum ScatterStatus scatter_inverse(const struct ScatterData *data,
                                   const struct ScatterConfig *cfg,
                                   struct ScatterReconstruction **out);

// Number of grid points; 0 for a null handle.
//
// # Safety
// `rec` must be null or a live handle.
size_t scatter_reconstruction_len(const struct ScatterReconstruction *rec);

// Copies the grid and both reconstructions into buffers of `capacity`
// doubles each. Null buffers are skipped.
//
// # Safety
// `rec` must be a live handle; non-null buffers must hold `capacity` doubles.
enum ScatterStatus scatter_reconstruction_copy(const struct ScatterReconstruction *rec,
                                               double *x,
                                               double *q_plus,
                                               double *q_minus,
                                               size_t capacity);

// Largest difference between the two reconstructions; NaN for a null handle.
//
// # Safety
// `rec` must be null or a live handle.
double scatter_reconstruction_discrepancy(const struct ScatterReconstruction *rec);

// Number of failed checks of the inverse solve; 0 for a null handle.
//
// # Safety
// `rec` must be null or a live handle.
size_t scatter_reconstruction_failed_checks(const struct ScatterReconstruction *rec);

// # Safety
// `rec` must be null or a handle from this library, not yet freed.
void scatter_reconstruction_free(struct ScatterReconstruction *rec);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCATTER_H */
