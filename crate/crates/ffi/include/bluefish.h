#ifndef BLUEFISH_H
#define BLUEFISH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum BfStatus {
  BF_STATUS_OK = 0,
  /**
   * The document produced error diagnostics; the result holds them.
   */
  BF_STATUS_DIAGNOSTICS = 1,
  BF_STATUS_NULL_ARGUMENT = 2,
  BF_STATUS_INDEX_OUT_OF_RANGE = 3,
  /**
   * An internal failure was caught at the boundary.
   */
  BF_STATUS_PANIC = 4,
} BfStatus;

/**
 * Compiler state: the kind registry.
 */
typedef struct BfEngine BfEngine;

/**
 * Outcome of one render: SVG and dump on success, plus diagnostics.
 */
typedef struct BfResult BfResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create an engine with the standard kinds. Returns NULL only on an
 * internal failure.
 */
struct BfEngine *bf_engine_new(void);

/**
 * # Safety
 * `engine` must be NULL or a pointer from [`bf_engine_new`] not yet freed.
 */
void bf_engine_free(struct BfEngine *engine);

/**
 * Compile `len` bytes of document text. On `Ok` and `Diagnostics`,
 * `*out` receives a result handle; otherwise it is set to NULL.
 *
 * # Safety
 * `engine` must come from [`bf_engine_new`]; `doc` must point to `len`
 * readable bytes; `out` must be writable.
 */
enum BfStatus bf_render(const struct BfEngine *engine,
                        const uint8_t *doc,
                        size_t len,
                        struct BfResult **out);

/**
 * SVG text, or NULL if the render failed.
 *
 * # Safety
 * `result` must be NULL or a live handle from [`bf_render`].
 */
const char *bf_result_svg(const struct BfResult *result);

/**
 * Canonical scene dump, or NULL if the render failed.
 *
 * # Safety
 * `result` must be NULL or a live handle from [`bf_render`].
 */
const char *bf_result_dump(const struct BfResult *result);

/**
 * Number of diagnostics (errors, or warnings on success).
 *
 * # Safety
 * `result` must be NULL or a live handle from [`bf_render`].
 */
size_t bf_result_diagnostic_count(const struct BfResult *result);

/**
 * Stable code (e.g. `BF001`) and full text of diagnostic `index`.
 * Either output pointer may be NULL.
 *
 * # Safety
 * `result` must be a live handle from [`bf_render`]; non-NULL outputs
 * must be writable.
 */
enum BfStatus bf_result_diagnostic(const struct BfResult *result,
                                   size_t index,
                                   const char **code,
                                   const char **message);

/**
 * # Safety
 * `result` must be NULL or a handle from [`bf_render`] not yet freed.
 */
void bf_result_free(struct BfResult *result);

/**
 * Static description of a status code.
 */
const char *bf_status_str(enum BfStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLUEFISH_H */
