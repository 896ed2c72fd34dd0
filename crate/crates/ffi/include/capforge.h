#ifndef CAPFORGE_H
#define CAPFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  CF_STATUS_OUT_OF_RANGE = 3,
  CF_STATUS_CAP_EXCEEDED = 4,
  CF_STATUS_IO = 5,
  CF_STATUS_PARSE = 6,
  CF_STATUS_UNSUPPORTED = 7,
  CF_STATUS_PANIC = 8,
} CfStatus;

typedef enum CfMisStatus {
  /**
   * The returned set is maximum.
   */
  CF_MIS_STATUS_EXACT = 0,
  /**
   * Budget ran out or the target was reached; the set is a lower bound.
   */
  CF_MIS_STATUS_LOWER_BOUND = 1,
  /**
   * No set of the target size exists; see `cf_mis_result_upper`.
   */
  CF_MIS_STATUS_UPPER_BOUND_CERTIFIED = 2,
} CfMisStatus;

/**
 * A graph together with the construction record that produced it.
 */
typedef struct CfGraph CfGraph;

/**
 * Outcome of an independent set search.
 */
typedef struct CfMisResult CfMisResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *cf_last_error(void);

/**
 * Graph on `n` vertices with `edge_count` edges given as `2 * edge_count`
 * 0-based endpoints.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (or be NULL when
 * `edge_count` is 0); `out` must be writable.
 */
enum CfStatus cf_graph_from_edges(size_t n,
                                  const size_t *edges,
                                  size_t edge_count,
                                  struct CfGraph **out);

/**
 * Canonical jump graph on `nu * n` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum CfStatus cf_jump_graph_sample(size_t nu, size_t n, uint64_t seed, struct CfGraph **out);

/**
 * Row/column jump graph on `nu * n` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum CfStatus cf_simple_jump_graph_sample(size_t nu, size_t n, uint64_t seed, struct CfGraph **out);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void cf_graph_free(struct CfGraph *g);

/**
 * Vertex count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t cf_graph_vertex_count(const struct CfGraph *g);

/**
 * Edge count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t cf_graph_edge_count(const struct CfGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CfStatus cf_graph_has_edge(const struct CfGraph *g, size_t u, size_t v, bool *out);

/**
 * Materialized strong power `G^k`. A `cap` of 0 uses the default cap (or
 * `CAPFORGE_CAP`).
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CfStatus cf_graph_strong_power(const struct CfGraph *g,
                                    size_t k,
                                    size_t cap,
                                    struct CfGraph **out);

/**
 * Writes the graph file and its `.meta.json` sidecar.
 *
 * # Safety
 * `g` must be a live handle and `path` a NUL-terminated string.
 */
enum CfStatus cf_graph_save(const struct CfGraph *g, const char *path);

/**
 * Reads a graph file, with its sidecar when present.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum CfStatus cf_graph_load(const char *path, struct CfGraph **out);

/**
 * Size of the construction's explicit independent set in `G^k`; 0 when the
 * construction has none at this `k`.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CfStatus cf_graph_certificate_size(const struct CfGraph *g, size_t k, uint64_t *out);

/**
 * `N^floor(k / nu)` for canonical parameters `(nu, n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CfStatus cf_explicit_power_set_size(size_t nu, size_t n, size_t k, uint64_t *out);

/**
 * Whether `count` tuples of length `k` (row-major in `coords`) are pairwise
 * non-adjacent in `G^k`.
 *
 * # Safety
 * `g` must be a live handle, `coords` must hold `count * k` values and `out`
 * must be writable.
 */
enum CfStatus cf_tuples_independent(const struct CfGraph *g,
                                    size_t k,
                                    const size_t *coords,
                                    size_t count,
                                    bool *out);

/**
 * Maximum independent set search. Zero `max_nodes`, non-positive `max_secs`
 * and zero `target` mean "no limit".
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CfStatus cf_mis_solve(const struct CfGraph *g,
                           uint64_t max_nodes,
                           double max_secs,
                           size_t target,
                           struct CfMisResult **out);

/**
 * # Safety
 * `r` must be NULL or a result not yet freed.
 */
void cf_mis_result_free(struct CfMisResult *r);

/**
 * Size of the best set found, or 0 for NULL.
 *
 * # Safety
 * `r` must be NULL or a live result.
 */
size_t cf_mis_result_size(const struct CfMisResult *r);

/**
 * # Safety
 * `r` must be a live result and `out` writable.
 */
enum CfStatus cf_mis_result_status(const struct CfMisResult *r, enum CfMisStatus *out);

/**
 * Proven upper bound on alpha; `*has_upper` is false when none was proven.
 *
 * # Safety
 * `r` must be a live result; `has_upper` and `upper` must be writable.
 */
enum CfStatus cf_mis_result_upper(const struct CfMisResult *r, bool *has_upper, size_t *upper);

/**
 * Copies up to `capacity` members (ascending) into `buf` and returns the
 * total member count. Pass `buf = NULL` to query the count.
 *
 * # Safety
 * `r` must be NULL or a live result; `buf` must hold `capacity` values.
 */
size_t cf_mis_result_members(const struct CfMisResult *r, size_t *buf, size_t capacity);

/**
 * `log10` of the union bound on `Pr[alpha(G) >= s]` for a canonical jump
 * graph on `vertex_count` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum CfStatus cf_first_moment_log10_bound(size_t nu, size_t vertex_count, size_t s, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAPFORGE_H */
