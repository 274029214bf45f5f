#ifndef MGN_H
#define MGN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every `mgn_*` call.
 */
typedef enum MgnStatus {
  MGN_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  MGN_STATUS_NULL_POINTER = 1,
  /**
   * Malformed argument, including bad UTF-8 or an unparsable κ index.
   */
  MGN_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The requested moduli space is unstable.
   */
  MGN_STATUS_UNSTABLE = 3,
  /**
   * Two engines, or an engine and the cache, disagree.
   */
  MGN_STATUS_DISAGREEMENT = 4,
  /**
   * A cache file could not be parsed.
   */
  MGN_STATUS_PARSE = 5,
  MGN_STATUS_IO = 6,
  /**
   * Unexpected internal failure.
   */
  MGN_STATUS_INTERNAL = 7,
} MgnStatus;

/**
 * Opaque engine handle holding both correlator engines and their caches.
 */
typedef struct MgnEngine MgnEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * New engine with empty caches. Never NULL.
 */
struct MgnEngine *mgn_engine_new(void);

/**
 * Releases an engine. NULL is ignored.
 *
 * # Safety
 * `eng` must be NULL or a handle from [`mgn_engine_new`] not yet freed.
 */
void mgn_engine_free(struct MgnEngine *eng);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from an `mgn_*` call not yet freed.
 */
void mgn_string_free(char *s);

/**
 * Message for the last failed call on this thread, or NULL.
 */
const char *mgn_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *mgn_version(void);

/**
 * `<τ_{d_1}…τ_{d_n}>_g`, computed by the τ/κ recursion and checked against
 * the n-point engine. Zero off the dimension constraint.
 *
 * # Safety
 * `eng` is a live handle, `d` points to `n` values (`n ≥ 1`), `out` is
 * writable.
 */
enum MgnStatus mgn_psi_correlator(const struct MgnEngine *eng,
                                  uint32_t genus,
                                  const uint32_t *d,
                                  size_t n,
                                  char **out);

/**
 * `<κ(b) τ_{d_1}…τ_{d_n}>_g` with `b` written as `"1:2,2:1"` (empty for
 * no κ classes). `n` may be 0 when `genus ≥ 2`.
 *
 * # Safety
 * As [`mgn_psi_correlator`]; `b` is a NUL-terminated string.
 */
enum MgnStatus mgn_kappa_correlator(const struct MgnEngine *eng,
                                    uint32_t genus,
                                    const uint32_t *d,
                                    size_t n,
                                    const char *b,
                                    char **out);

/**
 * `<κ(b)>_g` on `M̄_g`, `g ≥ 2`.
 *
 * # Safety
 * `eng` is a live handle, `b` a NUL-terminated string, `out` writable.
 */
enum MgnStatus mgn_pure_kappa_volume(const struct MgnEngine *eng,
                                     uint32_t genus,
                                     const char *b,
                                     char **out);

/**
 * `D_{g,n}` as a decimal string.
 *
 * # Safety
 * `eng` is a live handle, `out` writable.
 */
enum MgnStatus mgn_denominator(const struct MgnEngine *eng, uint32_t genus, size_t n, char **out);

/**
 * `𝒟_g` as a decimal string; fails with `Disagreement` if the κ definition
 * and `D_{g,3g−3}` differ.
 *
 * # Safety
 * `eng` is a live handle, `out` writable.
 */
enum MgnStatus mgn_script_denominator(const struct MgnEngine *eng, uint32_t genus, char **out);

/**
 * Merges a cache file into the engine. `count` (may be NULL) receives the
 * number of records read.
 *
 * # Safety
 * `eng` is a live handle, `path` a NUL-terminated string, `count` NULL or
 * writable.
 */
enum MgnStatus mgn_cache_load(const struct MgnEngine *eng, const char *path, size_t *count);

/**
 * Writes every cached correlator to `path`, replacing it.
 *
 * # Safety
 * `eng` is a live handle, `path` a NUL-terminated string.
 */
enum MgnStatus mgn_cache_save(const struct MgnEngine *eng, const char *path);

/**
 * Number of cached correlators.
 *
 * # Safety
 * `eng` is NULL (returns 0) or a live handle.
 */
size_t mgn_cache_len(const struct MgnEngine *eng);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MGN_H */
