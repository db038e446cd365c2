#ifndef TREERANK_H
#define TREERANK_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `TR_OK` is zero.
 */
typedef enum TrStatus {
  TR_OK = 0,
  TR_NULL_ARGUMENT = 1,
  TR_INVALID_ARGUMENT = 2,
  TR_BAD_PRIME = 3,
  TR_NOT_A_TREE = 4,
  TR_COMPONENT_CONTAINED = 5,
  TR_RETRY_EXHAUSTED = 6,
  TR_SEARCH_EXHAUSTED = 7,
  TR_SCHEMA_MISMATCH = 8,
  TR_REPLAY_DIVERGENCE = 9,
  TR_SERDE = 10,
  TR_INVARIANT_VIOLATION = 11,
  TR_INTERNAL = 12,
  TR_PANIC = 13,
} TrStatus;

/**
 * A witness certificate.
 */
typedef struct TrCertificate TrCertificate;

/**
 * A hypersurface over F_p.
 */
typedef struct TrHypersurface TrHypersurface;

/**
 * A tree of lines.
 */
typedef struct TrTree TrTree;

/**
 * Cohomology of the ideal of `Y ∩ W` in one degree.
 */
typedef struct TrCohomology {
  uint64_t h0;
  uint64_t h1;
  uint64_t rank;
  uint64_t h0_sheaf_of_ow;
  /**
   * 1 when `h0 == 0 || h1 == 0`.
   */
  uint8_t maximal_rank;
} TrCohomology;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from this thread.
 */
const char *tr_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tr_version(void);

/**
 * Random degree-`k` hypersurface in P^n over F_p, from `seed`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TrStatus tr_hypersurface_random(uint64_t p,
                                     size_t n,
                                     uint32_t k,
                                     uint64_t seed,
                                     struct TrHypersurface **out);

/**
 * The normal-form quadric of rank `rank` in P^n.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TrStatus tr_hypersurface_quadric(uint64_t p,
                                      size_t n,
                                      size_t rank,
                                      struct TrHypersurface **out);

/**
 * A hypersurface from its `C(n+k, n)` coefficients in graded-lex order.
 *
 * # Safety
 * `coeffs` must point to `len` readable values; `out` as above.
 */
enum TrStatus tr_hypersurface_from_coeffs(uint64_t p,
                                          size_t n,
                                          uint32_t k,
                                          const uint64_t *coeffs,
                                          size_t len,
                                          struct TrHypersurface **out);

/**
 * # Safety
 * `h` must be null or a handle from a `tr_hypersurface_*` constructor that
 * has not been freed.
 */
void tr_hypersurface_free(struct TrHypersurface *h);

/**
 * Random tree of the type whose parents are `tau[0..len]` (1-based, for
 * lines `2..=len+1`), transversal to `h`.
 *
 * # Safety
 * `h` must be a live handle, `tau` must point to `len` readable values
 * (it may be null when `len == 0`), `out` as above.
 */
enum TrStatus tr_tree_random(const struct TrHypersurface *h,
                             const size_t *tau,
                             size_t len,
                             uint64_t seed,
                             struct TrTree **out);

/**
 * Number of lines, or 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live tree handle.
 */
size_t tr_tree_degree(const struct TrTree *t);

/**
 * # Safety
 * `t` must be null or a live tree handle, freed at most once.
 */
void tr_tree_free(struct TrTree *t);

/**
 * `h^0` and `h^1` of the ideal of `tree ∩ h` on `h`, twisted by `t`.
 *
 * # Safety
 * `h` and `tree` must be live handles and `out` writable.
 */
enum TrStatus tr_cohomology(const struct TrHypersurface *h,
                            const struct TrTree *tree,
                            uint32_t t,
                            struct TrCohomology *out);

/**
 * Certificate for `tree ∩ h` over twists `[t_min, t_max]`.
 *
 * # Safety
 * `h` and `tree` must be live handles; `out` as above.
 */
enum TrStatus tr_certificate_new(const struct TrHypersurface *h,
                                 const struct TrTree *tree,
                                 uint32_t t_min,
                                 uint32_t t_max,
                                 uint64_t seed,
                                 struct TrCertificate **out);

/**
 * Parses a certificate from NUL-terminated JSON.
 *
 * # Safety
 * `json` must be a valid C string; `out` as above.
 */
enum TrStatus tr_certificate_from_json(const char *json, struct TrCertificate **out);

/**
 * Serializes a certificate. Release the string with [`tr_string_free`].
 *
 * # Safety
 * `cert` must be a live handle; `out` writable.
 */
enum TrStatus tr_certificate_to_json(const struct TrCertificate *cert, char **out);

/**
 * Recomputes the certificate; `*maximal_rank` is set to 1 when the
 * replayed profile is maximal rank at every twist.
 *
 * # Safety
 * `cert` must be a live handle; `maximal_rank` writable.
 */
enum TrStatus tr_certificate_replay(const struct TrCertificate *cert, uint8_t *maximal_rank);

/**
 * # Safety
 * `cert` must be null or a live handle, freed at most once.
 */
void tr_certificate_free(struct TrCertificate *cert);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void tr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TREERANK_H */
