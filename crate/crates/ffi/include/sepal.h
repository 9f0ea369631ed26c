#ifndef SEPAL_H
#define SEPAL_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SepalGraphKind {
  SEPAL_GRAPH_KIND_WEIGHTED = 0,
  SEPAL_GRAPH_KIND_SEPARATED = 1,
  SEPAL_GRAPH_KIND_BIPARTITE = 2,
} SepalGraphKind;

typedef enum SepalMap {
  // `L(E,ω) → L(E(ω),C(ω))`, vertex weighted input.
  SEPAL_MAP_PHI = 0,
  // `L₁(E,ω) → L(E(ω)₁,C(ω)¹)`.
  SEPAL_MAP_PHI1 = 1,
  // `L(E,C) → L(E₁,C¹)`.
  SEPAL_MAP_PHI0 = 2,
  // Corner generators into `L(E,C)`.
  SEPAL_MAP_RHO_TAU = 3,
} SepalMap;

// Result codes. `0..=3` mirror the command-line exit codes.
typedef enum SepalStatus {
  SEPAL_STATUS_OK = 0,
  // The check ran and the answer is negative.
  SEPAL_STATUS_FAILURE = 1,
  // A search budget ran out before an answer.
  SEPAL_STATUS_UNKNOWN = 2,
  // The computation rejected its input.
  SEPAL_STATUS_ERROR = 3,
  SEPAL_STATUS_NULL_ARGUMENT = 10,
  SEPAL_STATUS_INVALID_UTF8 = 11,
  SEPAL_STATUS_PARSE_ERROR = 12,
  SEPAL_STATUS_WRONG_GRAPH_KIND = 13,
  SEPAL_STATUS_PANIC = 14,
} SepalStatus;

// A parsed and validated graph.
typedef struct SepalGraph SepalGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static string.
const char *sepal_version(void);

// Message for the last failed call on this thread; empty if none. Valid
// until the next call into the library on the same thread.
const char *sepal_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void sepal_string_free(char *s);

// Parses a graph in the text format.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum SepalStatus sepal_graph_parse(const char *text, struct SepalGraph **out);

// Builds `E(m,n)` for `1 ≤ m ≤ n`.
//
// # Safety
// `out` must be writable.
enum SepalStatus sepal_graph_emn(size_t m, size_t n, struct SepalGraph **out);

// Releases a graph. Null is ignored.
//
// # Safety
// `g` must come from this library and not have been freed.
void sepal_graph_free(struct SepalGraph *g);

// Kind, vertex count and edge count; any out-pointer may be null.
//
// # Safety
// `g` must be a live handle; non-null out-pointers must be writable.
enum SepalStatus sepal_graph_info(const struct SepalGraph *g,
                                  enum SepalGraphKind *kind,
                                  size_t *vertices,
                                  size_t *edges);

// Canonical text form of the graph.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum SepalStatus sepal_graph_print(const struct SepalGraph *g, char **out);

// SHA-256 of the canonical text, as 64 hex digits.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum SepalStatus sepal_graph_hash(const struct SepalGraph *g, char **out);

// Normal form of an expression such as `e1 e1* + 2 v`, printed.
//
// # Safety
// `g` must be a live handle, `expr` a nul-terminated string and `out`
// writable.
enum SepalStatus sepal_normal_form(const struct SepalGraph *g, const char *expr, char **out);

// Checks that the map sends every relation to 0. Returns
// [`SepalStatus::Failure`] when some relation survives; `checked` (may be
// null) receives the number of relations.
//
// # Safety
// `g` must be a live handle; a non-null `checked` must be writable.
enum SepalStatus sepal_verify(const struct SepalGraph *g, enum SepalMap map, size_t *checked);

// Grothendieck group of the graph monoid, e.g. `Z/2` or `Z^2 + Z/3`.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum SepalStatus sepal_grothendieck(const struct SepalGraph *g, char **out);

// Runs a command-line invocation (without the program name) and returns
// its JSON report. The status is the report's status; usage errors give
// [`SepalStatus::Error`] and no report.
//
// # Safety
// `argv` must point to `argc` nul-terminated strings; `out` must be
// writable.
enum SepalStatus sepal_run_json(size_t argc, const char *const *argv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEPAL_H */
