#ifndef TWINMORSE_H
#define TWINMORSE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible call.
typedef enum TmStatus {
  TM_STATUS_OK = 0,
  TM_STATUS_NULL_POINTER = 1,
  TM_STATUS_INVALID_UTF8 = 2,
  // Bad configuration or argument, the analogue of CLI exit code 2.
  TM_STATUS_USAGE = 3,
  // The library reported a mathematical precondition failure.
  TM_STATUS_COMPUTE = 4,
  TM_STATUS_PANIC = 5,
} TmStatus;

// Suite options. Unset fields take the suite defaults.
typedef struct TmConfig TmConfig;

// A finished suite run together with its canonical JSON text.
typedef struct TmReport TmReport;

// A zonotope with rational generators.
typedef struct TmZonotope TmZonotope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. Never null; empty if nothing failed yet.
const char *tm_last_error(void);

struct TmConfig *tm_config_new(void);

// # Safety
// `cfg` must come from [`tm_config_new`] and not be used afterwards. Null is ignored.
void tm_config_free(struct TmConfig *cfg);

// Affine type such as `"A2"`, or a product such as `"A1xA2"` for horolinks.
//
// # Safety
// `cfg` must be a live handle and `kind` a NUL-terminated string.
enum TmStatus tm_config_set_type(struct TmConfig *cfg, const char *kind);

// Window radius as a positive rational string.
//
// # Safety
// `cfg` must be a live handle and `radius` a NUL-terminated string.
enum TmStatus tm_config_set_radius(struct TmConfig *cfg, const char *radius);

// # Safety
// `cfg` must be a live handle.
enum TmStatus tm_config_set_seed(struct TmConfig *cfg, uint64_t seed);

// # Safety
// `cfg` must be a live handle.
enum TmStatus tm_config_set_trials(struct TmConfig *cfg, size_t trials);

// Field size for the flag buildings of the hemisphere suite.
//
// # Safety
// `cfg` must be a live handle.
enum TmStatus tm_config_set_q(struct TmConfig *cfg, uint32_t q);

// # Safety
// `cfg` must be a live handle.
enum TmStatus tm_config_set_strict_window(struct TmConfig *cfg, bool strict);

// Runs a suite. On success `*out` receives a report handle to be released with [`tm_report_free`].
//
// # Safety
// `suite` must be a NUL-terminated string, `cfg` null or a live handle, `out` writable.
enum TmStatus tm_run_suite(const char *suite, const struct TmConfig *cfg, struct TmReport **out);

// # Safety
// `r` must come from [`tm_run_suite`] and not be used afterwards. Null is ignored.
void tm_report_free(struct TmReport *r);

// Canonical JSON of the report, owned by the handle. Null for a null handle.
//
// # Safety
// `r` must be null or a live handle.
const char *tm_report_json(const struct TmReport *r);

// Number of failing cases, or -1 for a null handle.
//
// # Safety
// `r` must be null or a live handle.
int64_t tm_report_failures(const struct TmReport *r);

// Builds `Z(D)` in dimension `dim` from `n_gens` generators given row by row as
// `n_gens * dim` rational strings.
//
// # Safety
// `coords` must point to `n_gens * dim` NUL-terminated strings, `out` must be writable.
enum TmStatus tm_zonotope_new(size_t dim,
                              size_t n_gens,
                              const char *const *coords,
                              struct TmZonotope **out);

// # Safety
// `z` must come from [`tm_zonotope_new`] and not be used afterwards. Null is ignored.
void tm_zonotope_free(struct TmZonotope *z);

// Membership test for a point of `dim` rational strings. `*inside` is set on success.
//
// # Safety
// `z` must be a live handle, `point` must hold `dim` strings, `inside` must be writable.
enum TmStatus tm_zonotope_contains(const struct TmZonotope *z,
                                   const char *const *point,
                                   bool *inside);

// Squared distance from a point to the zonotope, written as a rational string into `buf`.
// With `buf` too small (or null) nothing is written and `*needed` gets the size including the NUL.
//
// # Safety
// `z` must be a live handle, `point` must hold `dim` strings, `buf` must have `cap` bytes, `needed` must be writable.
enum TmStatus tm_zonotope_distance_sq(const struct TmZonotope *z,
                                      const char *const *point,
                                      char *buf,
                                      size_t cap,
                                      size_t *needed);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TWINMORSE_H */
