#ifndef SIMTERM_H
#define SIMTERM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum SimtermStatus {
  SIMTERM_STATUS_OK = 0,
  SIMTERM_STATUS_NULL_ARGUMENT = 1,
  SIMTERM_STATUS_INVALID_UTF8 = 2,
  SIMTERM_STATUS_INVALID_JSON = 3,
  SIMTERM_STATUS_DIMENSION_MISMATCH = 10,
  SIMTERM_STATUS_INVALID_INPUT = 11,
  SIMTERM_STATUS_EMPTY_CONE = 12,
  SIMTERM_STATUS_NOT_SIMPLICIAL = 13,
  SIMTERM_STATUS_NOT_GORENSTEIN = 14,
  SIMTERM_STATUS_NOT_Q_GORENSTEIN = 15,
  SIMTERM_STATUS_NOT_POLYGON = 16,
  SIMTERM_STATUS_NOT_GORENSTEIN_HOMOGENEOUS = 17,
  SIMTERM_STATUS_NOT_FIBRE_COMPATIBLE = 18,
  SIMTERM_STATUS_NO_POSITIVE_RELATION = 19,
  SIMTERM_STATUS_NOT_A_CIRCUIT = 20,
  SIMTERM_STATUS_SEARCH_EXHAUSTED = 30,
  SIMTERM_STATUS_RESOURCE_GUARD = 31,
  SIMTERM_STATUS_PANIC = 99,
} SimtermStatus;

/**
 * Opaque rational polyhedral cone.
 */
typedef struct SimtermCone SimtermCone;

/**
 * Opaque homogeneous toric deformation.
 */
typedef struct SimtermDeformation SimtermDeformation;

/**
 * Opaque flop pair.
 */
typedef struct SimtermFlopPair SimtermFlopPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *simterm_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string previously returned by this library.
 */
void simterm_string_free(char *s);

/**
 * Parses `{"dim": d, "rays": [[...], ...]}` into a cone handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SimtermStatus simterm_cone_from_json(const char *json, struct SimtermCone **out);

/**
 * # Safety
 * `cone` must be null or a handle from this library, not yet freed.
 */
void simterm_cone_free(struct SimtermCone *cone);

/**
 * Serializes the cone back to JSON.
 *
 * # Safety
 * `cone` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_cone_to_json(const struct SimtermCone *cone, char **out);

/**
 * Singularity flags of the cone as JSON.
 *
 * # Safety
 * `cone` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_cone_classify(const struct SimtermCone *cone, char **out);

/**
 * Crepant triangulation with empty cells, together with its verification
 * report, as `{"triangulation": ..., "check": ...}`.
 *
 * # Safety
 * `cone` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_cone_terminalize(const struct SimtermCone *cone, char **out);

/**
 * Flags of the cyclic quotient `1/l (weights)` as JSON.
 *
 * # Safety
 * `weights` must point to `len` readable integers; `out` must be writable.
 */
enum SimtermStatus simterm_quotient_classify(uint64_t l,
                                             const int64_t *weights,
                                             size_t len,
                                             char **out);

/**
 * Builds the deformation over `{"n": n, "summands": [{"vertices": ...}, ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SimtermStatus simterm_deformation_from_summands(const char *json,
                                                     struct SimtermDeformation **out);

/**
 * # Safety
 * `d` must be null or a handle from this library, not yet freed.
 */
void simterm_deformation_free(struct SimtermDeformation *d);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_deformation_to_json(const struct SimtermDeformation *d, char **out);

/**
 * Total-space cone of the deformation as a new cone handle.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_deformation_cone(const struct SimtermDeformation *d,
                                            struct SimtermCone **out);

/**
 * Central fibre cone, in the fibre basis, as a new cone handle.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_deformation_central_fibre(const struct SimtermDeformation *d,
                                                     struct SimtermCone **out);

/**
 * Searches a crepant triangulation of the total space and returns
 * `{"triangulation": ..., "report": ...}`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_deformation_terminalize(const struct SimtermDeformation *d, char **out);

/**
 * Builds the flop pair with parameters `(a, b)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SimtermStatus simterm_flop_build(uint64_t a, uint64_t b, struct SimtermFlopPair **out);

/**
 * # Safety
 * `pair` must be null or a handle from this library, not yet freed.
 */
void simterm_flop_free(struct SimtermFlopPair *pair);

/**
 * # Safety
 * `pair` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_flop_to_json(const struct SimtermFlopPair *pair, char **out);

/**
 * Deformation underlying the flop pair as a new handle.
 *
 * # Safety
 * `pair` must be a live handle; `out` must be writable.
 */
enum SimtermStatus simterm_flop_deformation(const struct SimtermFlopPair *pair,
                                            struct SimtermDeformation **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMTERM_H */
