#ifndef STAR_FACTOR_H
#define STAR_FACTOR_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirrored by the CLI exit codes.
 */
typedef enum SfStatus {
  SF_OK = 0,
  /**
   * The packing failed verification.
   */
  SF_INVALID = 1,
  /**
   * Bad input: precondition or parse failure.
   */
  SF_INPUT_ERROR = 2,
  /**
   * A faithful-mode solver stage failed.
   */
  SF_SOLVER_FAILURE = 3,
  /**
   * A required pointer argument was null.
   */
  SF_NULL_POINTER = 4,
} SfStatus;

/**
 * Opaque graph handle.
 */
typedef struct SfGraph SfGraph;

/**
 * Opaque packing handle.
 */
typedef struct SfPacking SfPacking;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent error message on this thread; empty when the last call
 * succeeded. The pointer stays valid until the next failing call.
 */
const char *sf_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 */
void sf_string_free(char *s);

/**
 * Builds a graph from an edge array (`2*edge_count` vertex indices,
 * endpoint pairs). Returns null on invalid input.
 */
struct SfGraph *sf_graph_from_edges(size_t vertex_count,
                                    const size_t *endpoints,
                                    size_t edge_count);

/**
 * Reads a graph file (text format, `graph <n>` header plus `e <u> <v>`
 * lines). Returns null on parse failure.
 */
struct SfGraph *sf_graph_read_file(const char *path);

enum SfStatus sf_graph_write_file(const struct SfGraph *g, const char *path);

void sf_graph_free(struct SfGraph *g);

size_t sf_graph_vertex_count(const struct SfGraph *g);

size_t sf_graph_edge_count(const struct SfGraph *g);

size_t sf_graph_min_degree(const struct SfGraph *g);

/**
 * Random graph with minimum degree at least `d`. Returns null on bad
 * parameters.
 */
struct SfGraph *sf_graph_random_min_degree(size_t n, size_t d, uint64_t seed);

/**
 * Random simple `d`-regular graph (`n*d` even). Returns null on bad
 * parameters.
 */
struct SfGraph *sf_graph_random_regular(size_t n, size_t d, uint64_t seed);

/**
 * The three-layer extremal instance on `n(1+ceil(sqrt(d)))+d` vertices.
 */
struct SfGraph *sf_graph_lower_bound(size_t d, size_t n, uint64_t seed);

/**
 * Smallest `n` at which the extremal family certifies its star-size
 * ceiling.
 */
size_t sf_lower_bound_threshold(size_t d);

/**
 * Computes a star factor of a graph with minimum degree at least `d`.
 * On success `*out_packing` owns the factor and, when `out_report_json` is
 * non-null, `*out_report_json` owns a JSON report string.
 */
enum SfStatus sf_solve(const struct SfGraph *g,
                       size_t d,
                       uint64_t seed,
                       bool faithful,
                       struct SfPacking **out_packing,
                       char **out_report_json);

/**
 * Star factor of a `d`-regular graph through the warm-up pipeline.
 */
enum SfStatus sf_solve_regular(const struct SfGraph *g,
                               size_t d,
                               uint64_t seed,
                               bool faithful,
                               struct SfPacking **out_packing,
                               char **out_report_json);

void sf_packing_free(struct SfPacking *p);

size_t sf_packing_star_count(const struct SfPacking *p);

/**
 * True minimum star size; 0 for an empty packing or null handle.
 */
size_t sf_packing_min_star_size(const struct SfPacking *p);

size_t sf_packing_star_center(const struct SfPacking *p, size_t star);

size_t sf_packing_star_size(const struct SfPacking *p, size_t star);

/**
 * Copies the leaves of one star into `buf` (capacity `cap`); returns the
 * number of leaves written.
 */
size_t sf_packing_star_leaves(const struct SfPacking *p, size_t star, size_t *buf, size_t cap);

struct SfPacking *sf_packing_read_file(const char *path);

enum SfStatus sf_packing_write_file(const struct SfPacking *p, const char *path);

/**
 * Verifies `p` against `g` at minimum star size `ell`. `cover_all` demands
 * that every vertex is covered (an `S_ell`-factor). Returns `SfOk` when
 * valid, `SfInvalid` with the violation list in [`sf_last_error`] otherwise.
 */
enum SfStatus sf_verify(const struct SfGraph *g,
                        const struct SfPacking *p,
                        size_t ell,
                        bool cover_all);

/**
 * Exact maximum `ell` admitting a star factor, for graphs of at most
 * `limit` vertices. `*out_isolated` is set when an isolated vertex makes
 * every factor impossible.
 */
enum SfStatus sf_oracle_max_factor_size(const struct SfGraph *g,
                                        size_t limit,
                                        size_t *out_ell,
                                        bool *out_isolated);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STAR_FACTOR_H */
