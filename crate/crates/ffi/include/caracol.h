#ifndef CARACOL_H
#define CARACOL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdint.h>
#include <stddef.h>

typedef enum CrStatus {
  CR_STATUS_OK = 0,
  CR_STATUS_NULL_POINTER = 1,
  CR_STATUS_INVALID_ARGUMENT = 2,
  CR_STATUS_INVALID_GRAPH = 3,
  CR_STATUS_PARSE_ERROR = 4,
  CR_STATUS_PANIC = 5,
} CrStatus;

/**
 * Opaque graph handle.
 */
typedef struct CrGraph CrGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph from a spec string such as `caracol:n=5,k=2`.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum CrStatus cr_graph_from_spec(const char *spec, struct CrGraph **out);

/**
 * k-caracol graph on n+1 vertices.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CrStatus cr_graph_caracol(uint32_t n, uint32_t k, struct CrGraph **out);

/**
 * k-multicaracol graph on a+2 vertices.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CrStatus cr_graph_multicaracol(uint32_t a, uint32_t k, struct CrGraph **out);

/**
 * # Safety
 * `g` must come from one of the constructors and not be freed already. Null is ignored.
 */
void cr_graph_free(struct CrGraph *g);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t cr_graph_num_vertices(const struct CrGraph *g);

/**
 * Number of edges, counted with multiplicity, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t cr_graph_num_edges(const struct CrGraph *g);

/**
 * Normalized volume of the flow polytope at net flow `netflow`.
 *
 * # Safety
 * `g` must be a live handle, `netflow` must point to `len` values and `out`
 * must be a valid pointer.
 */
enum CrStatus cr_volume(const struct CrGraph *g, const int64_t *netflow, size_t len, char **out);

/**
 * Kostant partition function at `v`.
 *
 * # Safety
 * As for [`cr_volume`].
 */
enum CrStatus cr_kostant(const struct CrGraph *g, const int64_t *v, size_t len, char **out);

/**
 * Lattice points of the flow polytope at net flow `netflow`.
 *
 * # Safety
 * As for [`cr_volume`].
 */
enum CrStatus cr_lattice_points(const struct CrGraph *g,
                                const int64_t *netflow,
                                size_t len,
                                char **out);

/**
 * Volume at the unit flow, evaluated as K_G(v_out) = K_G(v_in).
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CrStatus cr_volume_unit_flow(const struct CrGraph *g, char **out);

/**
 * T_k(r, i).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CrStatus cr_k_parking_number(uint64_t k, uint64_t r, uint64_t i, char **out);

/**
 * Rational Catalan number Cat(a, b).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum CrStatus cr_rational_catalan(uint64_t a, uint64_t b, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void cr_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into the library.
 */
const char *cr_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARACOL_H */
