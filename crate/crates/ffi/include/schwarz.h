#ifndef SCHWARZ_H
#define SCHWARZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SzStatus {
  SZ_STATUS_OK = 0,
  SZ_STATUS_NULL_POINTER = 1,
  SZ_STATUS_INVALID_ARGUMENT = 2,
  SZ_STATUS_PARSE = 3,
  SZ_STATUS_DOMAIN = 4,
  SZ_STATUS_PRECISION = 5,
  SZ_STATUS_BACKEND_MISMATCH = 6,
  SZ_STATUS_DIVISION_BY_ZERO = 7,
  SZ_STATUS_ENUMERATION = 8,
  SZ_STATUS_NOT_FOUND = 9,
  SZ_STATUS_PANIC = 10,
} SzStatus;

/**
 * Opaque handle to a truncated q-series.
 */
typedef struct SzSeries SzSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *sz_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sz_string_free(char *s);

/**
 * Release a series handle. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sz_series_free(struct SzSeries *s);

/**
 * Expansion of a named form modulo `O(q^order)`. `precision` 0 selects the
 * exact rational backend, anything else the complex backend with that
 * many bits.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum SzStatus sz_form(const char *name, int64_t order, uint32_t precision, struct SzSeries **out);

/**
 * Arithmetic on two series: `op` is one of `'+'`, `'-'`, `'*'`, `'/'`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum SzStatus sz_series_binary(const struct SzSeries *a,
                               char op,
                               const struct SzSeries *b,
                               struct SzSeries **out);

/**
 * `s^(p/q)`, with the leading coefficient normalized to one when
 * `normalize` is nonzero.
 *
 * # Safety
 * `s` must be a live handle, `exponent` a NUL-terminated string such as
 * `"1/3"`, and `out` writable.
 */
enum SzStatus sz_series_pow(const struct SzSeries *s,
                            const char *exponent,
                            int32_t normalize,
                            struct SzSeries **out);

/**
 * Normalized Schwarzian `{h, τ}/2π²`.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum SzStatus sz_schwarzian(const struct SzSeries *h, struct SzSeries **out);

/**
 * Textual expansion, e.g. `1 + 240 q + O(q^2)`.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum SzStatus sz_series_to_string(const struct SzSeries *s, char **out);

/**
 * JSON wire format of the series.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum SzStatus sz_series_to_json(const struct SzSeries *s, char **out);

/**
 * Fit a Schwarzian against `θ₂⁸` and `(θ₃θ₄)⁴` below `q^order`; the
 * result is written as JSON.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum SzStatus sz_fit(const struct SzSeries *s, int64_t order, char **out);

/**
 * Classify `S = a·(θ₃θ₄)⁴ + b·θ₂⁸` with `a`, `b` exact fractions; the
 * result is written as JSON.
 *
 * # Safety
 * `a`, `b` must be NUL-terminated strings and `out` writable.
 */
enum SzStatus sz_classify(const char *a, const char *b, char **out);

/**
 * Order of `⟨a, b | b², relators⟩`, e.g. `"a^3, (ba)^3"`.
 *
 * # Safety
 * `relators` must be a NUL-terminated string and `out` writable.
 */
enum SzStatus sz_coset_enumerate(const char *relators, size_t max_cosets, size_t *out);

/**
 * Run one catalog record; `order` ≤ 0 selects its default order. The
 * verdict is written as JSON; `passed` receives 1 on pass and 0 otherwise.
 *
 * # Safety
 * `id` must be a NUL-terminated string; `out` and `passed` writable.
 */
enum SzStatus sz_verify(const char *id, int64_t order, int32_t *passed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHWARZ_H */
