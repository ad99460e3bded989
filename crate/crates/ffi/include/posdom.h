#ifndef POSDOM_H
#define POSDOM_H

/* This file is generated by cbindgen from the posdom-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a C-ABI call. Mirrors the CLI exit codes where they exist.
typedef enum PosdomStatus {
  // Success.
  POSDOM_STATUS_OK = 0,
  // A required pointer argument was null or not valid UTF-8.
  POSDOM_STATUS_NULL_ARGUMENT = 1,
  // A config, domain, or argument failed validation.
  POSDOM_STATUS_VALIDATION = 2,
  // The external model process misbehaved.
  POSDOM_STATUS_MODEL_PROTOCOL = 3,
  // An internal panic was caught; the library state is unspecified.
  POSDOM_STATUS_PANIC = 5,
} PosdomStatus;

// An approximate positive domain handle.
typedef struct PosdomApd PosdomApd;

// A loaded problem: config, instantiated model, and the effective
// (margin-shrunk) target.
typedef struct PosdomProblem PosdomProblem;

// Contingency-table counts and derived metrics for one evaluation.
// `tpr` is meaningful only when `tpr_defined` is true.
typedef struct PosdomEvalReport {
  uint64_t tp;
  uint64_t fp;
  uint64_t fn_;
  uint64_t tn;
  double tpr;
  bool tpr_defined;
  double accuracy;
} PosdomEvalReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent error on this thread, or null when no
// error has occurred. The pointer stays valid until the next failing call
// on the same thread; do not free it.
const char *posdom_last_error_message(void);

// Parses a problem config from JSON, instantiates its model (launching the
// external process for command models), and applies the margin to the
// target.
//
// # Safety
// `json` must point to a NUL-terminated string; `out` must be a valid
// pointer. On success the caller owns the handle and must release it with
// [`posdom_problem_free`].
enum PosdomStatus posdom_problem_from_json(const char *json, struct PosdomProblem **out);

// Releases a problem handle (and shuts down its external model process, if
// any). Null is ignored.
//
// # Safety
// `problem` must be a handle returned by this library and not yet freed.
void posdom_problem_free(struct PosdomProblem *problem);

// Runs grid → label → train → extract and returns the carved domain.
//
// # Safety
// `problem` must be a live problem handle; `out` must be valid. The caller
// owns the resulting handle.
enum PosdomStatus posdom_carve(const struct PosdomProblem *problem, struct PosdomApd **out);

// Keeps only the boxes whose inner grid maps entirely inside the target.
// `inner_delta <= 0` selects the default (a quarter of the domain's
// granularity).
//
// # Safety
// `problem` and `apd` must be live handles; `out` must be valid. The
// caller owns the resulting handle.
enum PosdomStatus posdom_refine(const struct PosdomProblem *problem,
                                const struct PosdomApd *apd,
                                double inner_delta,
                                struct PosdomApd **out);

// Evaluates the domain on a uniform test set drawn with the config's seed
// and size, filling `report`.
//
// # Safety
// `problem` and `apd` must be live handles; `report` must point to
// writable memory for one report struct.
enum PosdomStatus posdom_evaluate(const struct PosdomProblem *problem,
                                  const struct PosdomApd *apd,
                                  struct PosdomEvalReport *report);

// Parses a domain from its JSON form.
//
// # Safety
// `json` must point to a NUL-terminated string; `out` must be valid. The
// caller owns the resulting handle.
enum PosdomStatus posdom_apd_from_json(const char *json, struct PosdomApd **out);

// Serializes the domain to JSON.
//
// # Safety
// `apd` must be a live handle; `out` must be valid. Free the string with
// [`posdom_string_free`].
enum PosdomStatus posdom_apd_to_json(const struct PosdomApd *apd, char **out);

// Number of boxes in the domain.
//
// # Safety
// `apd` must be a live handle; `out` must be valid.
enum PosdomStatus posdom_apd_num_boxes(const struct PosdomApd *apd, size_t *out);

// Number of input dimensions the domain was carved over.
//
// # Safety
// `apd` must be a live handle; `out` must be valid.
enum PosdomStatus posdom_apd_dims(const struct PosdomApd *apd, size_t *out);

// Whether the domain contains the point `(coords[0], ..., coords[len-1])`.
// `len` must equal the domain's dimension count.
//
// # Safety
// `apd` must be a live handle; `coords` must point to `len` readable
// doubles; `out` must be valid.
enum PosdomStatus posdom_apd_contains(const struct PosdomApd *apd,
                                      const double *coords,
                                      size_t len,
                                      bool *out);

// Human-readable report: one line per box with per-dimension intervals.
//
// # Safety
// `apd` must be a live handle; `out` must be valid. Free the string with
// [`posdom_string_free`].
enum PosdomStatus posdom_apd_box_report(const struct PosdomApd *apd, char **out);

// Releases a domain handle. Null is ignored.
//
// # Safety
// `apd` must be a handle returned by this library and not yet freed.
void posdom_apd_free(struct PosdomApd *apd);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be a string returned by this library and not yet freed.
void posdom_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSDOM_H */
