#ifndef TRIDIST_H
#define TRIDIST_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TdStatus {
  TD_STATUS_OK = 0,
  TD_STATUS_NULL_POINTER = 1,
  TD_STATUS_INVALID_UTF8 = 2,
  TD_STATUS_PARSE = 3,
  TD_STATUS_INVALID_INPUT = 4,
  TD_STATUS_COLLINEAR_FRAME = 5,
  TD_STATUS_INVALID_CONFIGURATION = 6,
  TD_STATUS_KAPPA_CAP = 7,
  TD_STATUS_INTERNAL = 8,
  TD_STATUS_PANIC = 9,
} TdStatus;

/**
 * Distance census of a configuration.
 */
typedef struct TdCensus TdCensus;

/**
 * A validated point configuration together with its input scale.
 */
typedef struct TdConfig TdConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *td_last_error(void);

/**
 * Library version as a static string.
 */
const char *td_version(void);

/**
 * Parses a configuration document. Collinear frames are rejected unless
 * `collinear_diagnostics` is set.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out_config` writable.
 */
enum TdStatus td_config_parse(const char *json,
                              bool collinear_diagnostics,
                              struct TdConfig **out_config);

/**
 * # Safety
 * `config` must come from [`td_config_parse`] or be null.
 */
void td_config_free(struct TdConfig *config);

/**
 * # Safety
 * `config` must be a live handle and `out_n` writable.
 */
enum TdStatus td_config_len(const struct TdConfig *config, size_t *out_n);

/**
 * # Safety
 * `config` must be a live handle and `out_census` writable.
 */
enum TdStatus td_census_build(const struct TdConfig *config, struct TdCensus **out_census);

/**
 * # Safety
 * `census` must come from [`td_census_build`] or be null.
 */
void td_census_free(struct TdCensus *census);

/**
 * Number of distinct squared distances.
 *
 * # Safety
 * `census` must be a live handle and `out_kappa` writable.
 */
enum TdStatus td_census_kappa(const struct TdCensus *census, size_t *out_kappa);

/**
 * Unordered pairs at equal distance from `p3`, and whether
 * `Q >= n^2/(2 kappa) - n/2` holds.
 *
 * # Safety
 * `census` must be a live handle; both outputs writable.
 */
enum TdStatus td_census_pair_count(const struct TdCensus *census,
                                   uint64_t *out_q,
                                   bool *out_bound_holds);

/**
 * Incidence count `I` over `D^4`; fails with `KappaCap` above `max_kappa`.
 *
 * # Safety
 * `config` must be a live handle and `out_i` writable.
 */
enum TdStatus td_incidence_count(const struct TdConfig *config, size_t max_kappa, size_t *out_i);

/**
 * JSON analysis report; release with [`td_string_free`].
 *
 * # Safety
 * `config` must be a live handle and `out_json` writable.
 */
enum TdStatus td_analyze_json(const struct TdConfig *config, char **out_json);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void td_string_free(char *s);

/**
 * Exact test of `(Y, U)` on `gamma_{X,V}` in frame `p3 = (a, b)`, with
 * `A >= 0` and `B >= 0`. `out_dual` receives the dual-curve answer.
 *
 * # Safety
 * All string arguments must be nul-terminated; outputs writable.
 */
enum TdStatus td_membership(const char *a,
                            const char *b,
                            const char *x,
                            const char *y,
                            const char *u,
                            const char *v,
                            bool *out_member,
                            bool *out_dual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIDIST_H */
