#pragma once

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from the vorint-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VorintCountMode {
  VORINT_COUNT_MODE_FIXED = 0,
  VORINT_COUNT_MODE_POISSON = 1,
} VorintCountMode;

typedef enum VorintMethod {
  VORINT_METHOD_MC = 0,
  VORINT_METHOD_VOR = 1,
  VORINT_METHOD_FVOR = 2,
  VORINT_METHOD_CVOR = 3,
} VorintMethod;

typedef enum VorintStatus {
  VORINT_STATUS_OK = 0,
  VORINT_STATUS_NULL_POINTER = 1,
  VORINT_STATUS_INVALID_ARGUMENT = 2,
  VORINT_STATUS_REJECTION_EXHAUSTED = 3,
  VORINT_STATUS_ESTIMATION_FAILED = 4,
  VORINT_STATUS_GEOMETRY_ERROR = 5,
  VORINT_STATUS_INTERNAL_PANIC = 6,
} VorintStatus;

// Opaque integrand handle.
typedef struct VorintIntegrand VorintIntegrand;

// Opaque tessellation handle.
typedef struct VorintTessellation VorintTessellation;

// User evaluation callback: f(x, y, user_data) → value. Nullable.
//
// The callback must be safe to call from the thread invoking
// `vorint_estimate` and must not unwind across the boundary.
typedef double (*VorintEvalFn)(double x, double y, void *user);

// One integral estimate and its sampling statistics.
typedef struct VorintEstimate {
  double value;
  uint64_t n_interior;
  uint64_t n_strip;
  uint32_t retries;
  double wall_time_ms;
} VorintEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Human-readable name of a status code (static storage).
const char *vorint_status_message(enum VorintStatus status);

// Upper bound on the rejection probability at intensity `n` and margin
// `epsilon`. NaN on invalid input.
double vorint_reject_bound(double n, double epsilon);

// Smallest margin on the decreasing branch meeting the confidence `delta`.
//
// # Safety
// `out_epsilon` must be NULL or point to writable memory.
enum VorintStatus vorint_solve_epsilon(double n, double delta, double *out_epsilon);

// Strip point count ⌊n(4ε + 4ε²)⌋.
uint64_t vorint_strip_count(double n, double epsilon);

// Builds one of the built-in benchmark integrands ("holder" with its
// exponent passed as `alpha`, "not_holder", "discontinuity"). Pass NaN for
// `alpha` when it is not applicable. NULL on unknown name or bad exponent.
//
// # Safety
// `name` must be NULL or point to a NUL-terminated string.
struct VorintIntegrand *vorint_integrand_builtin(const char *name, double alpha);

// Wraps a user callback as an integrand on the canonical window
// [−1/2, 1/2]². `user` is passed through untouched.
struct VorintIntegrand *vorint_integrand_callback(VorintEvalFn eval, void *user);

// # Safety
// `f` must be a pointer previously returned by one of the
// `vorint_integrand_*` constructors and not yet freed.
void vorint_integrand_free(struct VorintIntegrand *f);

// Runs one estimate over the canonical window.
//
// `n` is the sample count (intensity); `mode` picks fixed or Poisson
// counts for the stretched-window methods; `delta` is the rejection
// confidence (pass 0 for the 1/1000 default).
//
// # Safety
// `f` must be a live integrand handle; `out` must point to writable memory.
enum VorintStatus vorint_estimate(const struct VorintIntegrand *f,
                                  enum VorintMethod method,
                                  uint64_t n,
                                  uint64_t seed,
                                  enum VorintCountMode mode,
                                  double delta,
                                  struct VorintEstimate *out);

// Voronoi tessellation of `len` points given as parallel coordinate
// arrays. NULL on degenerate input (empty set, exact duplicates,
// non-finite coordinates).
//
// # Safety
// `xs` and `ys` must point to `len` readable doubles.
struct VorintTessellation *vorint_tessellate(const double *xs, const double *ys, uintptr_t len);

// # Safety
// `t` must be a pointer previously returned by `vorint_tessellate` and not
// yet freed.
void vorint_tessellation_free(struct VorintTessellation *t);

// # Safety
// `t` must be a live tessellation handle (or NULL, which yields 0).
uintptr_t vorint_cell_count(const struct VorintTessellation *t);

// 1 if cell `i` is bounded, 0 if unbounded, −1 on a bad index.
//
// # Safety
// `t` must be a live tessellation handle.
int32_t vorint_cell_bounded(const struct VorintTessellation *t, uintptr_t i);

// Cell area (+∞ for unbounded cells, NaN on a bad index).
//
// # Safety
// `t` must be a live tessellation handle.
double vorint_cell_area(const struct VorintTessellation *t, uintptr_t i);

// Circumscribed radius (+∞ for unbounded cells, NaN on a bad index).
//
// # Safety
// `t` must be a live tessellation handle.
double vorint_cell_circ_radius(const struct VorintTessellation *t, uintptr_t i);

// Area of cell `i` clipped to the square window centred at (cx, cy) with
// the given half extent. NaN on bad input.
//
// # Safety
// `t` must be a live tessellation handle.
double vorint_clip_cell_area(const struct VorintTessellation *t,
                             uintptr_t i,
                             double cx,
                             double cy,
                             double half_extent);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
