/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef TVQ_H
#define TVQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TvqStatus {
  TVQ_STATUS_OK = 0,
  TVQ_STATUS_NULL_POINTER = 1,
  TVQ_STATUS_INVALID_UTF8 = 2,
  // Malformed gluing text: syntax, index range or pairing errors.
  TVQ_STATUS_PARSE_ERROR = 3,
  // Parsed, but not a closed 3-manifold triangulation.
  TVQ_STATUS_INVALID_TRIANGULATION = 4,
  TVQ_STATUS_NOT_IN_CATALOG = 5,
  TVQ_STATUS_INVALID_R = 6,
  // The value has no polynomial form in `q`.
  TVQ_STATUS_NOT_IN_SUBFIELD = 7,
  // Internal consistency failure, e.g. a vanishing denominator.
  TVQ_STATUS_INTERNAL = 8,
  TVQ_STATUS_PANIC = 9,
} TvqStatus;

// Evaluation point: the standard `q` or its negative.
typedef enum TvqEvaluation {
  TVQ_EVALUATION_STANDARD = 0,
  TVQ_EVALUATION_MIRROR = 1,
} TvqEvaluation;

typedef enum TvqInvariant {
  TVQ_INVARIANT_TV0 = 0,
  TVQ_INVARIANT_TV1 = 1,
  TVQ_INVARIANT_TV2 = 2,
  TVQ_INVARIANT_TV = 3,
  TVQ_INVARIANT_TV_STAR0 = 4,
  TVQ_INVARIANT_TV_STAR1 = 5,
  TVQ_INVARIANT_TV_STAR_E = 6,
  TVQ_INVARIANT_TV_STAR = 7,
} TvqInvariant;

// Invariants of one triangulation at one `r` and evaluation point.
typedef struct TvqReport TvqReport;

// A validated closed triangulation.
typedef struct TvqTriangulation TvqTriangulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses gluing text and validates it.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum TvqStatus tvq_triangulation_from_text(const char *text, struct TvqTriangulation **out);

// Looks up a builtin manifold by name, e.g. `"L(3,1)"` or `"L31"`.
//
// # Safety
// `name` must be a nul-terminated string and `out` a valid pointer.
enum TvqStatus tvq_triangulation_from_catalog(const char *name, struct TvqTriangulation **out);

// # Safety
// `tri` must come from this library and not have been freed; null is ignored.
void tvq_triangulation_free(struct TvqTriangulation *tri);

// Cell counts of the quotient complex. Any out-pointer may be null.
//
// # Safety
// `tri` must be a live handle; non-null out-pointers must be valid.
enum TvqStatus tvq_triangulation_counts(const struct TvqTriangulation *tri,
                                        size_t *vertices,
                                        size_t *edges,
                                        size_t *faces,
                                        size_t *tetrahedra);

// First homology as text, e.g. `"Z/3"` or `"0"`.
//
// # Safety
// `tri` must be a live handle and `out` a valid pointer.
enum TvqStatus tvq_triangulation_homology(const struct TvqTriangulation *tri, char **out);

// Computes every invariant at `r`. `workers = 0` picks the default.
//
// # Safety
// `tri` must be a live handle and `out` a valid pointer.
enum TvqStatus tvq_compute(const struct TvqTriangulation *tri,
                           uint32_t r,
                           enum TvqEvaluation evaluation,
                           size_t workers,
                           struct TvqReport **out);

// Checks the exact identities between the two evaluation points at `r`.
//
// # Safety
// `tri` must be a live handle and `all_hold` a valid pointer.
enum TvqStatus tvq_verify_identities(const struct TvqTriangulation *tri,
                                     uint32_t r,
                                     size_t workers,
                                     bool *all_hold);

// # Safety
// `report` must come from this library and not have been freed; null is ignored.
void tvq_report_free(struct TvqReport *report);

// Complex value of one invariant.
//
// # Safety
// `report` must be a live handle; `re` and `im` valid pointers.
enum TvqStatus tvq_report_value(const struct TvqReport *report,
                                enum TvqInvariant which,
                                double *re,
                                double *im);

// Exact value as a polynomial in `q`, e.g. `"2q^3-4q"`.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum TvqStatus tvq_report_polynomial(const struct TvqReport *report,
                                     enum TvqInvariant which,
                                     char **out);

// Admissible coloring counts; `adm_e` includes the all-even colorings.
//
// # Safety
// `report` must be a live handle; non-null out-pointers must be valid.
enum TvqStatus tvq_report_colorings(const struct TvqReport *report,
                                    uint64_t *adm0,
                                    uint64_t *adm1,
                                    uint64_t *adm_e);

// Whether every internal consistency check of the report holds.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum TvqStatus tvq_report_checks_pass(const struct TvqReport *report, bool *out);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *tvq_last_error_message(void);

// # Safety
// `s` must come from this library and not have been freed; null is ignored.
void tvq_string_free(char *s);

// Library version, a static string.
const char *tvq_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TVQ_H */
