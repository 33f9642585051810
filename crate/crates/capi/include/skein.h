/* C interface to the skein computation engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from skein-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function in this interface.
typedef enum SkeinStatus {
  // The call succeeded.
  SKEIN_STATUS_OK = 0,
  // A required pointer argument was null.
  SKEIN_STATUS_NULL_ARG = 1,
  // The input text could not be parsed.
  SKEIN_STATUS_PARSE = 2,
  // The computation rejected a structurally valid input, or could not
  // certify its answer.
  SKEIN_STATUS_INVARIANT = 3,
  // A numeric argument was out of range (for example a weight on a wall).
  SKEIN_STATUS_BAD_PARAMETER = 4,
  // An unexpected internal failure; free the handles involved.
  SKEIN_STATUS_INTERNAL = 5,
} SkeinStatus;

// A parsed framed link diagram.
typedef struct SkeinDiagram SkeinDiagram;

// A skein evaluator that memoizes across calls; reuse one handle when
// evaluating many related diagrams.
typedef struct SkeinEvaluator SkeinEvaluator;

// A set of curve records over a fixed brane list.
typedef struct SkeinModuli SkeinModuli;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the library version as a static string; do not free it.
const char *skein_version(void);

// Returns a copy of the most recent error message on this thread, or null
// if no call has failed yet.  Free the copy with [`skein_string_free`].
char *skein_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `text` must be null or a pointer previously returned through a `char **`
// output of this library, not yet freed.
void skein_string_free(char *text);

// Parses a braid-closure (`BR[n, [i, ...]]`) or planar-diagram (`PD[...]`)
// description into a diagram handle.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid location
// for a pointer.
enum SkeinStatus skein_diagram_parse(const char *text, struct SkeinDiagram **out);

// Releases a diagram handle.
//
// # Safety
// `diagram` must be null or an unfreed handle from [`skein_diagram_parse`].
void skein_diagram_free(struct SkeinDiagram *diagram);

// Writes the number of link components of the diagram.
//
// # Safety
// `diagram` must be a live handle and `out` a valid location for a `size_t`.
enum SkeinStatus skein_diagram_components(const struct SkeinDiagram *diagram, size_t *out);

// Writes the number of crossings of the diagram.
//
// # Safety
// `diagram` must be a live handle and `out` a valid location for a `size_t`.
enum SkeinStatus skein_diagram_crossings(const struct SkeinDiagram *diagram, size_t *out);

// Writes the writhe (signed crossing sum) of the diagram.
//
// # Safety
// `diagram` must be a live handle and `out` a valid location for an
// `int64_t`.
enum SkeinStatus skein_diagram_writhe(const struct SkeinDiagram *diagram, int64_t *out);

// Parses a diagram and writes its framed skein invariant as a Laurent
// polynomial in `a` and `z`, for example `"a*z^-1 - a^-1*z^-1"`.
//
// One-shot convenience around [`skein_diagram_parse`] and
// [`skein_evaluator_homfly`]; no state is retained.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid location
// for a `char *`.
enum SkeinStatus skein_homfly(const char *text, char **out);

// Creates a memoizing evaluator.
//
// # Safety
// `out` must be a valid location for a pointer.
enum SkeinStatus skein_evaluator_new(struct SkeinEvaluator **out);

// Releases an evaluator handle.
//
// # Safety
// `evaluator` must be null or an unfreed handle from
// [`skein_evaluator_new`].
void skein_evaluator_free(struct SkeinEvaluator *evaluator);

// Writes the framed skein invariant of `diagram`, reusing everything the
// evaluator has already resolved.
//
// # Safety
// `evaluator` and `diagram` must be live handles and `out` a valid location
// for a `char *`.
enum SkeinStatus skein_evaluator_homfly(struct SkeinEvaluator *evaluator,
                                        const struct SkeinDiagram *diagram,
                                        char **out);

// Parses a JSON moduli description (branes, truncation, curve records) into
// a handle.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid location
// for a pointer.
enum SkeinStatus skein_moduli_parse_json(const char *text, struct SkeinModuli **out);

// Releases a moduli handle.
//
// # Safety
// `moduli` must be null or an unfreed handle from
// [`skein_moduli_parse_json`].
void skein_moduli_free(struct SkeinModuli *moduli);

// Writes the partition function of the moduli set as a truncated series in
// the class variables, with boundary factors kept symbolic.
//
// # Safety
// `moduli` must be a live handle and `out` a valid location for a `char *`.
enum SkeinStatus skein_moduli_partition(const struct SkeinModuli *moduli, char **out);

// Writes the total assembled invariant with every S3 boundary factor
// replaced by its skein value.
//
// # Safety
// `moduli` must be a live handle and `out` a valid location for a `char *`.
enum SkeinStatus skein_moduli_collapse_s3(const struct SkeinModuli *moduli, char **out);

// Applies one wall move, described as JSON, to the moduli set in place.
// The collapsed invariant is unchanged by a valid move.
//
// # Safety
// `moduli` must be a live handle and `event_json` a valid NUL-terminated
// string.
enum SkeinStatus skein_moduli_apply_wall_event(struct SkeinModuli *moduli, const char *event_json);

// Formal dimension of a closed-curve problem in a space of complex
// dimension `ambient_dim`: `(ambient_dim - 3) * euler + 2 * chern_pairing`.
int64_t skein_formal_dim_closed(int64_t ambient_dim, int64_t euler, int64_t chern_pairing);

// Formal dimension of a bordered-curve problem in a space of complex
// dimension `ambient_dim`: `(ambient_dim - 3) * euler + maslov`.
int64_t skein_formal_dim_open(int64_t ambient_dim, int64_t euler, int64_t maslov);

// Writes the index of the weighted dbar operator on the cylinder
// (`strip == false`) or strip (`strip == true`) with exponential weights
// `delta_minus`, `delta_plus` at the ends.  Weights within 1e-9 of a wall
// `2*pi*k` are rejected with `SKEIN_STATUS_BAD_PARAMETER`.
//
// # Safety
// `out` must be a valid location for an `int64_t`.
enum SkeinStatus skein_dbar_index(double delta_minus, double delta_plus, bool strip, int64_t *out);

// Writes the dbar index computed from a finite-difference spectral
// discretization rather than the counting formula.  Pass `modes <= 0`,
// `length <= 0`, or `grid == 0` to use the defaults (automatic mode range,
// length 10, 2000 grid cells).  Returns `SKEIN_STATUS_INVARIANT` when the
// discretization cannot certify a mode, and `SKEIN_STATUS_BAD_PARAMETER`
// for weights on a wall or an inadequate grid.
//
// # Safety
// `out` must be a valid location for an `int64_t`.
enum SkeinStatus skein_dbar_index_numeric(double delta_minus,
                                          double delta_plus,
                                          bool strip,
                                          int64_t modes,
                                          double length,
                                          size_t grid,
                                          int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
