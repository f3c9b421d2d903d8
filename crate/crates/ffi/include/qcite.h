#ifndef QCITE_H
#define QCITE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QciteStatus {
  QCITE_STATUS_OK = 0,
  QCITE_STATUS_NULL_POINTER = 1,
  QCITE_STATUS_INVALID_ARGUMENT = 2,
  QCITE_STATUS_DOMAIN = 3,
  QCITE_STATUS_PARSE = 4,
  QCITE_STATUS_EMPTY_DATA = 5,
  QCITE_STATUS_INSUFFICIENT_DATA = 6,
  QCITE_STATUS_MISSING_ANCHOR = 7,
  QCITE_STATUS_NON_CONVERGENCE = 8,
  QCITE_STATUS_IO = 9,
  QCITE_STATUS_BUFFER_TOO_SMALL = 10,
  QCITE_STATUS_PANIC = 11,
} QciteStatus;

/**
 * Opaque fit configuration.
 */
typedef struct QciteConfig QciteConfig;

/**
 * Opaque citation histogram.
 */
typedef struct QciteHistogram QciteHistogram;

/**
 * Paper counts and percentage shares of 0, 1 and 2 citations.
 */
typedef struct QciteSummary {
  uint64_t total_papers;
  uint64_t n0;
  uint64_t n1;
  uint64_t n2;
  double pct0;
  double pct1;
  double pct2;
} QciteSummary;

/**
 * Outcome of a fit.
 */
typedef struct QciteFit {
  double q;
  double t;
  double r2;
  uint64_t anchor_c;
  uint64_t anchor_value;
  size_t n_points_q;
  size_t n_points_t;
} QciteFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *qcite_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qcite_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QciteStatus qcite_q_exp(double x, double q, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QciteStatus qcite_q_log(double y, double q, double *out);

/**
 * Tsallis entropy of `len` probabilities summing to one.
 *
 * # Safety
 * `p` must point to `len` readable doubles and `out` must be valid for writes.
 */
enum QciteStatus qcite_tsallis_entropy(const double *p,
                                       size_t len,
                                       double q,
                                       double k,
                                       double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QciteStatus qcite_entropy_composition(double sa, double sb, double q, double k, double *out);

/**
 * Builds a histogram from parallel arrays of citation counts and paper counts.
 *
 * # Safety
 * `entity` must be a NUL-terminated string, `citations` and `counts` must
 * point to `len` readable values, `out` must be valid for writes.
 */
enum QciteStatus qcite_histogram_from_arrays(const char *entity,
                                             const uint64_t *citations,
                                             const uint64_t *counts,
                                             size_t len,
                                             struct QciteHistogram **out);

/**
 * Loads a `citations,count` CSV file. A NULL `entity` takes the file stem.
 *
 * # Safety
 * `path` must be a NUL-terminated string, `entity` NULL or NUL-terminated,
 * `out` valid for writes.
 */
enum QciteStatus qcite_histogram_load_csv(const char *path,
                                          const char *entity,
                                          struct QciteHistogram **out);

/**
 * # Safety
 * `h` must be NULL or a handle from this library not yet freed.
 */
void qcite_histogram_free(struct QciteHistogram *h);

/**
 * Papers with exactly `c` citations (0 for absent bins).
 *
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum QciteStatus qcite_histogram_count(const struct QciteHistogram *h, uint64_t c, uint64_t *out);

/**
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum QciteStatus qcite_histogram_summary(const struct QciteHistogram *h, struct QciteSummary *out);

/**
 * CSV text of the histogram; release with `qcite_string_free`.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum QciteStatus qcite_histogram_to_csv(const struct QciteHistogram *h, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void qcite_string_free(char *s);

/**
 * Default fit configuration.
 */
struct QciteConfig *qcite_config_new(void);

/**
 * # Safety
 * `cfg` must be NULL or a handle from this library not yet freed.
 */
void qcite_config_free(struct QciteConfig *cfg);

/**
 * Sets the q search grid. The configuration is left unchanged on error.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum QciteStatus qcite_config_set_q_grid(struct QciteConfig *cfg,
                                         double min,
                                         double max,
                                         double step);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum QciteStatus qcite_config_set_anchor_c(struct QciteConfig *cfg, uint64_t anchor_c);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum QciteStatus qcite_config_set_window_decades(struct QciteConfig *cfg, double decades);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum QciteStatus qcite_config_set_min_count(struct QciteConfig *cfg, uint64_t min_count);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum QciteStatus qcite_config_set_min_fit_points(struct QciteConfig *cfg, size_t points);

/**
 * # Safety
 * `cfg` must be a live handle.
 */
enum QciteStatus qcite_config_set_include_c1(struct QciteConfig *cfg, bool include);

/**
 * Two-stage fit. A NULL `cfg` uses the defaults.
 *
 * # Safety
 * `h` must be a live handle, `cfg` NULL or live, `out` valid for writes.
 */
enum QciteStatus qcite_fit(const struct QciteHistogram *h,
                           const struct QciteConfig *cfg,
                           struct QciteFit *out);

/**
 * Fits `T` with `q` held fixed. A NULL `cfg` uses the defaults.
 *
 * # Safety
 * As for `qcite_fit`.
 */
enum QciteStatus qcite_refit_t_fixed_q(const struct QciteHistogram *h,
                                       double q,
                                       const struct QciteConfig *cfg,
                                       struct QciteFit *out);

/**
 * Writes `(c - ref_c, ln_q(N(c) / N(ref_c)))` pairs into `x` and `y`.
 *
 * `len` always receives the number of points. If it exceeds `capacity`,
 * nothing is written and `QCITE_STATUS_BUFFER_TOO_SMALL` is returned; a
 * call with `capacity` 0 and NULL buffers queries the size.
 *
 * # Safety
 * `h` must be a live handle, `x` and `y` valid for `capacity` writes,
 * `len` valid for writes.
 */
enum QciteStatus qcite_linearize(const struct QciteHistogram *h,
                                 double q,
                                 uint64_t ref_c,
                                 double *x,
                                 double *y,
                                 size_t capacity,
                                 size_t *len);

/**
 * Rounded model counts `N(c)` for `c = 2..=c_max`.
 *
 * # Safety
 * `entity` must be NUL-terminated and `out` valid for writes.
 */
enum QciteStatus qcite_synth_deterministic(const char *entity,
                                           double q,
                                           double t,
                                           uint64_t anchor_value,
                                           uint64_t c_max,
                                           struct QciteHistogram **out);

/**
 * `n_samples` seeded draws from the continuous law, shifted to start at c = 2.
 *
 * # Safety
 * `entity` must be NUL-terminated and `out` valid for writes.
 */
enum QciteStatus qcite_synth_sampled(const char *entity,
                                     double q,
                                     double t,
                                     uint64_t n_samples,
                                     uint64_t seed,
                                     struct QciteHistogram **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCITE_H */
