#ifndef CSWEN_H
#define CSWEN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Limiter applied to troubled cells.
 */
typedef enum CswenLimiter {
  CSWEN_LIMITER_NONE = 0,
  CSWEN_LIMITER_CSWEN = 1,
  CSWEN_LIMITER_WENO = 2,
} CswenLimiter;

/**
 * Result codes.
 */
typedef enum CswenStatus {
  CSWEN_STATUS_OK = 0,
  CSWEN_STATUS_NULL_POINTER = 1,
  CSWEN_STATUS_INVALID_ARGUMENT = 2,
  CSWEN_STATUS_CONFIG = 3,
  CSWEN_STATUS_UNSUPPORTED = 4,
  CSWEN_STATUS_NON_PHYSICAL_STATE = 5,
  CSWEN_STATUS_IO = 6,
  CSWEN_STATUS_INTERNAL = 7,
  CSWEN_STATUS_PANIC = 8,
} CswenStatus;

/**
 * Opaque solver handle.
 */
typedef struct CswenSolver CswenSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the calling thread's last error message into `buf` (NUL-terminated, truncated to
 * `len`). Returns the full message length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t cswen_last_error_message(char *buf, size_t len);

/**
 * Create a solver for a registered problem at its initial time. `cells_x`/`cells_y` of 0
 * take the problem's default mesh (`cells_y` is ignored in 1D).
 *
 * # Safety
 * `problem_id` must be a NUL-terminated string; `out` must be writable.
 */
enum CswenStatus cswen_solver_new(const char *problem_id,
                                  uint32_t order,
                                  uint32_t cells_x,
                                  uint32_t cells_y,
                                  enum CswenLimiter limiter,
                                  struct CswenSolver **out);

/**
 * Release a solver. Null is accepted.
 *
 * # Safety
 * `solver` must come from [`cswen_solver_new`] and not be used afterwards.
 */
void cswen_solver_free(struct CswenSolver *solver);

/**
 * Advance one step without passing `t_end`; writes the new time to `time` if non-null.
 *
 * # Safety
 * `solver` must be a live handle; `time` null or writable.
 */
enum CswenStatus cswen_solver_step(struct CswenSolver *solver, double t_end, double *time);

/**
 * Step until `t_end`; a negative `t_end` means the problem's own final time.
 *
 * # Safety
 * `solver` must be a live handle.
 */
enum CswenStatus cswen_solver_run(struct CswenSolver *solver, double t_end);

/**
 * # Safety
 * `solver` must be a live handle; `time` writable.
 */
enum CswenStatus cswen_solver_time(struct CswenSolver *solver, double *time);

/**
 * Number of cells and of conserved variables.
 *
 * # Safety
 * `solver` must be a live handle; the outputs null or writable.
 */
enum CswenStatus cswen_solver_size(struct CswenSolver *solver, size_t *num_cells, size_t *num_vars);

/**
 * Cell averages of variable `var` into `out[0..len]`, cell order row by row in 2D.
 * `len` must equal the number of cells.
 *
 * # Safety
 * `solver` must be a live handle; `out` must point to `len` writable doubles.
 */
enum CswenStatus cswen_solver_cell_averages(struct CswenSolver *solver,
                                            size_t var,
                                            double *out,
                                            size_t len);

/**
 * WENO point value at reference point `r` of the middle cell of a `2N+1`-cell stencil.
 * `widths` are relative to the middle cell; `averages` are the stencil cell averages.
 *
 * # Safety
 * `widths` and `averages` must point to `2 * degree + 1` doubles; `out` must be writable.
 */
enum CswenStatus cswen_weno_point_value(uint32_t degree,
                                        const double *widths,
                                        const double *averages,
                                        double r,
                                        double epsilon,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSWEN_H */
