#ifndef BOXLOGIC_H
#define BOXLOGIC_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which of the three logics of a world a query refers to.
 */
typedef enum {
  BOXLOGIC_SIDE_LEFT = 0,
  BOXLOGIC_SIDE_RIGHT = 1,
  BOXLOGIC_SIDE_COMPOSITE = 2,
} BoxlogicSide;

/**
 * Result codes of every fallible call.
 */
typedef enum {
  BOXLOGIC_STATUS_OK = 0,
  BOXLOGIC_STATUS_NULL_ARGUMENT = 1,
  BOXLOGIC_STATUS_INVALID_UTF8 = 2,
  BOXLOGIC_STATUS_INPUT = 3,
  BOXLOGIC_STATUS_SPEC = 4,
  BOXLOGIC_STATUS_BUDGET = 5,
  BOXLOGIC_STATUS_INVALID_BEHAVIOR = 6,
  BOXLOGIC_STATUS_NOT_A_MEMBER = 7,
  BOXLOGIC_STATUS_JSON = 8,
  /**
   * A check ran and failed; the output argument is still filled in.
   */
  BOXLOGIC_STATUS_CHECK_FAILED = 9,
  BOXLOGIC_STATUS_INTERNAL = 10,
} BoxlogicStatus;

/**
 * A built box world: both single-box logics, the composite logic and the
 * product witness.
 */
typedef struct BoxlogicWorld BoxlogicWorld;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the world described by `spec` (JSON or `side.field = value`
 * lines). A `budget` of 0 selects the default element budget.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` a valid pointer.
 */
BoxlogicStatus boxlogic_world_new(const char *spec, size_t budget, BoxlogicWorld **out);

/**
 * # Safety
 * `world` must come from [`boxlogic_world_new`] and not be used afterwards.
 */
void boxlogic_world_free(BoxlogicWorld *world);

/**
 * Number of elements of one of the world's logics.
 *
 * # Safety
 * `world` must be a live handle and `out` a valid pointer.
 */
BoxlogicStatus boxlogic_world_element_count(const BoxlogicWorld *world,
                                            BoxlogicSide side,
                                            size_t *out);

/**
 * Number of atoms of one of the world's logics.
 *
 * # Safety
 * `world` must be a live handle and `out` a valid pointer.
 */
BoxlogicStatus boxlogic_world_atom_count(const BoxlogicWorld *world,
                                         BoxlogicSide side,
                                         size_t *out);

/**
 * Runs the full product verification and writes the same JSON document as
 * `boxlogic verify` to `*json_out`. Returns `CHECK_FAILED` (with the
 * document still written) when some check fails. A `max_dimension` of 0
 * selects the default vertex-enumeration cap.
 *
 * # Safety
 * `world` must be a live handle and `json_out` a valid pointer.
 */
BoxlogicStatus boxlogic_world_verify(const BoxlogicWorld *world,
                                     size_t max_dimension,
                                     char **json_out);

/**
 * Exact value of a behavior on an event expression such as `[1:{0}, *]`,
 * written as a rational string like `1/2`. A null `behavior_json` selects
 * the PR box.
 *
 * # Safety
 * `world` must be a live handle, the strings nul-terminated or null where
 * allowed, and `value_out` a valid pointer.
 */
BoxlogicStatus boxlogic_world_evaluate(const BoxlogicWorld *world,
                                       const char *behavior_json,
                                       const char *expression,
                                       char **value_out);

/**
 * CHSH value of a behavior in a world with two binary inputs per side, as a
 * rational string. A null `behavior_json` selects the PR box.
 *
 * # Safety
 * As for [`boxlogic_world_evaluate`].
 */
BoxlogicStatus boxlogic_world_chsh(const BoxlogicWorld *world,
                                   const char *behavior_json,
                                   char **value_out);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *boxlogic_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void boxlogic_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *boxlogic_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOXLOGIC_H */
