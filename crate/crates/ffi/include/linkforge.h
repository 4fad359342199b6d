#ifndef LINKFORGE_H
#define LINKFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum LfStatus {
  LF_STATUS_OK = 0,
  LF_STATUS_NULL_ARGUMENT = 1,
  LF_STATUS_INVALID_UTF8 = 2,
  LF_STATUS_PARSE = 3,
  LF_STATUS_VALIDATION = 4,
  LF_STATUS_DOMAIN = 5,
  LF_STATUS_CROSSING_CAP = 6,
  LF_STATUS_INVARIANT = 7,
  LF_STATUS_IO = 8,
  LF_STATUS_PANIC = 9,
} LfStatus;

/**
 * Opaque link diagram.
 */
typedef struct LfDiagram LfDiagram;

/**
 * Opaque string link.
 */
typedef struct LfTangle LfTangle;

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *lf_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 */
void lf_string_free(char *s);

/**
 * Parses a diagram from JSON or PD text.
 */
enum LfStatus lf_diagram_parse(const char *input, struct LfDiagram **out);

void lf_diagram_free(struct LfDiagram *d);

enum LfStatus lf_diagram_component_count(const struct LfDiagram *d, size_t *out);

enum LfStatus lf_diagram_crossing_count(const struct LfDiagram *d, size_t *out);

enum LfStatus lf_diagram_writhe(const struct LfDiagram *d, int64_t *out);

/**
 * Jones polynomial in canonical text form, e.g. `t + t^3 - t^4`.
 */
enum LfStatus lf_diagram_jones(const struct LfDiagram *d, char **out);

/**
 * Conway polynomial in canonical text form, e.g. `z^2 + 1`.
 */
enum LfStatus lf_diagram_conway(const struct LfDiagram *d, char **out);

enum LfStatus lf_diagram_to_json(const struct LfDiagram *d, char **out);

enum LfStatus lf_diagram_mirror(const struct LfDiagram *d, struct LfDiagram **out);

/**
 * Connected sum of component `i` of `l` with component `j` of `k`
 * (0-based), cut at the first arc of each.
 */
enum LfStatus lf_hashizume_sum(const struct LfDiagram *l,
                               size_t i,
                               const struct LfDiagram *k,
                               size_t j,
                               struct LfDiagram **out);

/**
 * Parses a string link from JSON with `"endpoints"`.
 */
enum LfStatus lf_tangle_parse(const char *input, struct LfTangle **out);

void lf_tangle_free(struct LfTangle *t);

enum LfStatus lf_tangle_strand_count(const struct LfTangle *t, size_t *out);

enum LfStatus lf_tangle_to_json(const struct LfTangle *t, char **out);

enum LfStatus lf_tangle_stack(const struct LfTangle *a,
                              const struct LfTangle *b,
                              struct LfTangle **out);

enum LfStatus lf_tangle_reflect(const struct LfTangle *t, struct LfTangle **out);

/**
 * Closes a string link. `pattern` is cycle notation such as `(1 2)`;
 * `side_bottom` nonzero walks the first strand of each cycle downward.
 */
enum LfStatus lf_tangle_close(const struct LfTangle *t,
                              const char *pattern,
                              int32_t side_bottom,
                              struct LfDiagram **out);

enum LfStatus lf_tangle_double(const struct LfTangle *t, struct LfDiagram **out);

/**
 * Sets `*excluded` to 1 when `v_knot` does not divide `v_link` (so the
 * knot is not a local knot), 0 when the test is inconclusive.
 */
enum LfStatus lf_exclude_local_knot(const char *v_link, const char *v_knot, int32_t *excluded);

#endif  /* LINKFORGE_H */
