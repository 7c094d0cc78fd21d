#ifndef RESIDUUM_H
#define RESIDUUM_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ResiduumStatus {
  RESIDUUM_STATUS_OK = 0,
  RESIDUUM_STATUS_NULL_ARGUMENT = 1,
  RESIDUUM_STATUS_INVALID_UTF8 = 2,
  RESIDUUM_STATUS_PARSE_ERROR = 3,
  RESIDUUM_STATUS_EVALUATION_ERROR = 4,
  RESIDUUM_STATUS_NOT_CERTIFIED = 5,
  RESIDUUM_STATUS_VERIFY_MISMATCH = 6,
  RESIDUUM_STATUS_INVALID_ARGUMENT = 7,
  RESIDUUM_STATUS_PANIC = 8,
} ResiduumStatus;

typedef enum ResiduumCommand {
  RESIDUUM_COMMAND_ANALYZE = 0,
  RESIDUUM_COMMAND_EVAL = 1,
  RESIDUUM_COMMAND_VERIFY = 2,
  RESIDUUM_COMMAND_GROUPING = 3,
} ResiduumCommand;

/**
 * A parsed problem. Opaque to C.
 */
typedef struct ResiduumProblem ResiduumProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next call.
 */
const char *residuum_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *residuum_version(void);

/**
 * Parse a problem description at `precision` bits (0 selects 128).
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ResiduumStatus residuum_problem_parse(const char *source,
                                           uint32_t precision,
                                           struct ResiduumProblem **out);

/**
 * Release a problem. NULL is ignored.
 *
 * # Safety
 * `p` must come from [`residuum_problem_parse`] and not be used afterwards.
 */
void residuum_problem_free(struct ResiduumProblem *p);

/**
 * Number of integration variables.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum ResiduumStatus residuum_problem_dimension(const struct ResiduumProblem *p, size_t *out);

/**
 * Residue-formula value. `certified` receives 1 or 0. Returns `Ok` even when the
 * result is not certified.
 *
 * # Safety
 * `p` must be a live handle; out-pointers must be valid.
 */
enum ResiduumStatus residuum_eval(const struct ResiduumProblem *p,
                                  int assume_convergent,
                                  double *re,
                                  double *im,
                                  int *certified);

/**
 * Direct quadrature of the integral (box half-width `t`, relative tolerance `tol`).
 *
 * # Safety
 * `p` must be a live handle; out-pointers must be valid.
 */
enum ResiduumStatus residuum_quadrature(const struct ResiduumProblem *p,
                                        double t,
                                        double tol,
                                        double *re,
                                        double *im,
                                        double *error_bound);

/**
 * Run a command and return its JSON document in `*json` (free with
 * [`residuum_string_free`]). `box_halfwidth`/`tol` apply to `Verify`; `grouping` may be
 * NULL (canonical) and applies to `Grouping`. The status mirrors the CLI exit code:
 * `NotCertified` and `VerifyMismatch` still produce the document.
 *
 * # Safety
 * `p` must be a live handle; `grouping` NULL or a NUL-terminated string; `json` valid.
 */
enum ResiduumStatus residuum_report_json(const struct ResiduumProblem *p,
                                         enum ResiduumCommand command,
                                         double box_halfwidth,
                                         double tol,
                                         const char *grouping,
                                         char **json);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void residuum_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESIDUUM_H */
