#ifndef CARTAN_WEYL_H
#define CARTAN_WEYL_H

/* Auto-generated by cbindgen from cartan-weyl-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum CwStatus {
  CW_STATUS_OK = 0,
  CW_STATUS_NULL_ARGUMENT = 1,
  CW_STATUS_INVALID_UTF8 = 2,
  CW_STATUS_PARSE_ERROR = 3,
  CW_STATUS_CHECK_ERROR = 4,
  CW_STATUS_NO_SUBGROUPOID = 5,
} CwStatus;

/**
 * An opaque parsed-and-validated instance.
 */
typedef struct CwInstance CwInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *cw_last_error(void);

/**
 * Library version as a static string.
 */
const char *cw_version(void);

/**
 * Parses instance text into a validated handle.
 *
 * # Safety
 * `name` and `text` must be NUL-terminated strings; `out` must be a valid
 * pointer. On success `*out` owns the instance and must be released with
 * `cw_instance_free`.
 */
enum CwStatus cw_instance_parse(const char *name, const char *text, struct CwInstance **out);

/**
 * Releases an instance handle. A null pointer is a no-op.
 *
 * # Safety
 * `ptr` must come from `cw_instance_parse` and not be freed twice.
 */
void cw_instance_free(struct CwInstance *ptr);

/**
 * Re-emits an instance in the text format (round-trippable).
 *
 * # Safety
 * `inst` must be a live handle; `out` must be valid. The returned string
 * must be released with `cw_string_free`.
 */
enum CwStatus cw_instance_emit(const struct CwInstance *inst, char **out);

/**
 * Runs the full check battery and returns the JSON report array
 * (one report per subgroupoid, plus one for a rotation block).
 * `subgroupoid` may be null to check every declared subgroupoid.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be valid. The returned string
 * must be released with `cw_string_free`.
 */
enum CwStatus cw_instance_check_json(const struct CwInstance *inst,
                                     const char *subgroupoid,
                                     char **out);

/**
 * Rotation-engine report for θ ("p/q" or "irrational") and a lattice
 * ("a b" for one generator, or "a b ; c d" for matrix rows whose columns
 * generate the subgroup). Returns the JSON report.
 *
 * # Safety
 * `theta` and `lattice` must be NUL-terminated strings; `out` must be
 * valid. The returned string must be released with `cw_string_free`.
 */
enum CwStatus cw_rotation_check_json(const char *theta, const char *lattice, char **out);

/**
 * Releases a string returned by this library. A null pointer is a no-op.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARTAN_WEYL_H */
