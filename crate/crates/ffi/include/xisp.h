#ifndef XISP_H
#define XISP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Parameter regime of the space.
typedef enum XispMode {
  XISP_MODE_SCALED = 0,
  XISP_MODE_FAITHFUL = 1,
} XispMode;

// Result of every fallible call.
typedef enum XispStatus {
  XISP_STATUS_OK = 0,
  XISP_STATUS_MALFORMED_INPUT = 1,
  XISP_STATUS_NOT_SUCCESSIVE = 2,
  XISP_STATUS_EMPTY_VECTOR = 3,
  XISP_STATUS_SUPPORT_TOO_LARGE = 4,
  XISP_STATUS_INFEASIBLE = 5,
  XISP_STATUS_PSI_PROJECTION_INVALID = 6,
  XISP_STATUS_NOT_TYPE_I = 7,
  XISP_STATUS_NOT_TYPE_II = 8,
  XISP_STATUS_CONSTRUCTION_INVARIANT_VIOLATED = 9,
  XISP_STATUS_MALFORMED_INSTANCE = 10,
  XISP_STATUS_VERIFICATION_FAILED = 11,
  XISP_STATUS_IO = 12,
  XISP_STATUS_NULL_POINTER = 13,
  XISP_STATUS_PANIC = 14,
} XispStatus;

// Coding registry together with the space configuration it was opened for.
typedef struct XispRegistry XispRegistry;

// Finitely supported vector with rational entries.
typedef struct XispVector XispVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library from the same thread.
const char *xisp_last_error(void);

// Stable kebab-case name of a status, as used by the command line tool.
const char *xisp_status_name(enum XispStatus status);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void xisp_string_free(char *s);

// Parses `{"entries": [["i", "p/q"], ...]}` into a new vector.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum XispStatus xisp_vector_from_json(const char *json, struct XispVector **out);

// Builds a vector from parallel arrays of indices and `"p/q"` strings.
//
// # Safety
// `indices` and `values` must each point to `len` readable elements.
enum XispStatus xisp_vector_new(const uint64_t *indices,
                                const char *const *values,
                                size_t len,
                                struct XispVector **out);

// Serialises a vector to JSON.
//
// # Safety
// `v` must be a live vector handle and `out` writable.
enum XispStatus xisp_vector_to_json(const struct XispVector *v, char **out);

// Number of nonzero entries; 0 for NULL.
//
// # Safety
// `v` must be NULL or a live vector handle.
size_t xisp_vector_support_size(const struct XispVector *v);

// Releases a vector. NULL is ignored.
//
// # Safety
// `v` must come from this library and not have been freed.
void xisp_vector_free(struct XispVector *v);

// Exact Tsirelson norm as a `"p/q"` string.
//
// # Safety
// `v` must be a live vector handle and `out` writable.
enum XispStatus xisp_tnorm(const struct XispVector *v, char **out);

// Certified norm interval as a JSON certificate. `registry` may be NULL, in
// which case no special functionals are available to the search.
//
// # Safety
// Handles must be live or NULL where allowed; `out` writable.
enum XispStatus xisp_norm_certificate(const struct XispVector *v,
                                      const struct XispRegistry *registry,
                                      enum XispMode mode,
                                      size_t depth,
                                      size_t children,
                                      size_t sizes,
                                      char **out);

// Membership of the set `{set[0], ..., set[len-1]}` in `S_n`.
//
// # Safety
// `set` must point to `len` readable elements; `out` writable.
enum XispStatus xisp_schreier_member(const uint64_t *set, size_t len, uint32_t n, bool *out);

// Generates an `(n, eps)` basic special convex combination on the stream
// `start, start + step, ...` and returns its validated descriptor as JSON.
//
// # Safety
// `eps` must be a NUL-terminated `"p/q"` string; `out` writable.
enum XispStatus xisp_scc(uint32_t n, const char *eps, uint64_t start, uint64_t step, char **out);

// Empty coding registry.
//
// # Safety
// `out` must be writable.
enum XispStatus xisp_registry_new(enum XispMode mode, struct XispRegistry **out);

// Opens a registry file, or starts an empty one if the file is missing.
//
// # Safety
// `path` must be a NUL-terminated string; `out` writable.
enum XispStatus xisp_registry_open(const char *path, enum XispMode mode, struct XispRegistry **out);

// Writes the registry to `path`.
//
// # Safety
// `r` must be a live registry handle; `path` a NUL-terminated string.
enum XispStatus xisp_registry_save(const struct XispRegistry *r, const char *path);

// Releases a registry. NULL is ignored.
//
// # Safety
// `r` must come from this library and not have been freed.
void xisp_registry_free(struct XispRegistry *r);

// Builds an exact pair of weight `n` and kind 0 or 1 starting at `start`,
// recording its codings in `r`, and returns the pair as JSON.
//
// # Safety
// `r` must be a live registry handle; `out` writable.
enum XispStatus xisp_build_exact_pair(struct XispRegistry *r,
                                      uint32_t n,
                                      uint8_t kind,
                                      uint64_t start,
                                      char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XISP_H */
