#ifndef TPIC_H
#define TPIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TpicStatus {
  TPIC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TPIC_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  TPIC_STATUS_INVALID_UTF8 = 2,
  /**
   * A JSON document could not be parsed.
   */
  TPIC_STATUS_FORMAT = 3,
  /**
   * The input was well formed but mathematically invalid.
   */
  TPIC_STATUS_DOMAIN = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  TPIC_STATUS_PANIC = 5,
} TpicStatus;

/**
 * Outcome of [`tpic_decide`].
 */
typedef enum TpicVerdict {
  TPIC_VERDICT_CERTIFIED_YES = 0,
  TPIC_VERDICT_CERTIFIED_NO = 1,
  TPIC_VERDICT_UNRESOLVED = 2,
} TpicVerdict;

/**
 * Opaque observable handle.
 */
typedef struct TpicObservable TpicObservable;

/**
 * Opaque subspace handle (traceless Hermitian operators).
 */
typedef struct TpicSubspace TpicSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string
 * after a successful call. Valid until the next call on this thread.
 */
const char *tpic_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tpic_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void tpic_string_free(char *s);

/**
 * Number of inequivalent (t, p) classes in dimension `d`; 0 if `d < 2`.
 */
size_t tpic_count_classes(size_t d);

/**
 * Parses an observable document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TpicStatus tpic_observable_from_json(const char *json, struct TpicObservable **out);

/**
 * # Safety
 * `obs` must be null or a handle from this library not yet freed.
 */
void tpic_observable_free(struct TpicObservable *obs);

/**
 * Serializes an observable; free the result with [`tpic_string_free`].
 *
 * # Safety
 * `obs` must be a live handle and `out` a valid pointer.
 */
enum TpicStatus tpic_observable_to_json(const struct TpicObservable *obs, char **out);

/**
 * # Safety
 * `obs` must be a live handle and `out` a valid pointer.
 */
enum TpicStatus tpic_observable_dim(const struct TpicObservable *obs, size_t *out);

/**
 * # Safety
 * `obs` must be a live handle and `out` a valid pointer.
 */
enum TpicStatus tpic_observable_num_outcomes(const struct TpicObservable *obs, size_t *out);

/**
 * Checks positivity and completeness. Returns `Domain` with a report in
 * [`tpic_last_error`] if the effects do not form an observable.
 *
 * # Safety
 * `obs` must be a live handle.
 */
enum TpicStatus tpic_observable_validate(const struct TpicObservable *obs);

/**
 * Outcome probabilities of the state `rho_json` (a matrix document).
 * `probs` must hold `len` doubles, and `len` must equal the number of
 * outcomes.
 *
 * # Safety
 * `obs` must be a live handle, `rho_json` NUL-terminated and `probs`
 * writable for `len` doubles.
 */
enum TpicStatus tpic_observable_statistics(const struct TpicObservable *obs,
                                           const char *rho_json,
                                           double *probs,
                                           size_t len);

/**
 * Annihilator of the observable's real operator system.
 *
 * # Safety
 * `obs` must be a live handle and `out` a valid pointer.
 */
enum TpicStatus tpic_observable_annihilator(const struct TpicObservable *obs,
                                            struct TpicSubspace **out);

/**
 * Observable whose annihilator is the given subspace.
 *
 * # Safety
 * `sub` must be a live handle and `out` a valid pointer.
 */
enum TpicStatus tpic_observable_from_annihilator(const struct TpicSubspace *sub,
                                                 struct TpicObservable **out);

/**
 * Covariant phase-space observable whose fiducial vanishes exactly on the
 * points `(xs[k], xis[k])`, `k < n`. The set must be closed under negation
 * and avoid the origin.
 *
 * # Safety
 * `xs` and `xis` must be readable for `n` elements (they may be null when
 * `n == 0`) and `out` must be a valid pointer.
 */
enum TpicStatus tpic_covariant_from_zero_set(size_t d,
                                             const size_t *xs,
                                             const size_t *xis,
                                             size_t n,
                                             double alpha,
                                             struct TpicObservable **out);

/**
 * Parses a subspace document.
 *
 * # Safety
 * `json` must be NUL-terminated and `out` a valid pointer.
 */
enum TpicStatus tpic_subspace_from_json(const char *json, struct TpicSubspace **out);

/**
 * # Safety
 * `sub` must be a live handle and `out` a valid pointer.
 */
enum TpicStatus tpic_subspace_to_json(const struct TpicSubspace *sub, char **out);

/**
 * Real dimension of the subspace.
 *
 * # Safety
 * `sub` must be a live handle and `out` a valid pointer.
 */
enum TpicStatus tpic_subspace_dim(const struct TpicSubspace *sub, size_t *out);

/**
 * # Safety
 * `sub` must be null or a handle from this library not yet freed.
 */
void tpic_subspace_free(struct TpicSubspace *sub);

/**
 * Decides whether no nonzero element of `sub` has `rank_down <= t` and
 * `rank_up <= p`, i.e. (t, p)-informational completeness of any
 * observable with this annihilator. On `CertifiedNo` the witness operator
 * is written to `witness_json` as a matrix document if that pointer is
 * non-null; otherwise `*witness_json` is set to null.
 *
 * # Safety
 * `sub` must be a live handle, `verdict` a valid pointer and
 * `witness_json` null or a valid pointer.
 */
enum TpicStatus tpic_decide(const struct TpicSubspace *sub,
                            size_t t,
                            size_t p,
                            size_t trials,
                            uint64_t seed,
                            enum TpicVerdict *verdict,
                            char **witness_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TPIC_H */
