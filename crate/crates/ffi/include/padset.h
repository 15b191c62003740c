#ifndef PADSET_H
#define PADSET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PadsetFamily {
  PADSET_FAMILY_KOZYREV = 0,
  PADSET_FAMILY_KHRENNIKOV_SHELKOVICH = 1,
} PadsetFamily;

typedef enum PadsetSetOp {
  PADSET_SET_OP_UNION = 0,
  PADSET_SET_OP_INTERSECTION = 1,
  PADSET_SET_OP_DIFFERENCE = 2,
  PADSET_SET_OP_SYMMETRIC_DIFFERENCE = 3,
} PadsetSetOp;

// Result code of every fallible call.
typedef enum PadsetStatus {
  PADSET_STATUS_OK = 0,
  PADSET_STATUS_NULL_ARGUMENT = 1,
  PADSET_STATUS_INVALID_UTF8 = 2,
  PADSET_STATUS_PARSE = 3,
  PADSET_STATUS_NOT_PRIME = 4,
  PADSET_STATUS_MIXED_PRIMES = 5,
  PADSET_STATUS_INVALID_INPUT = 6,
  PADSET_STATUS_RESOLUTION_LIMIT = 7,
  PADSET_STATUS_PRECONDITION = 8,
  PADSET_STATUS_INCONSISTENT = 9,
  PADSET_STATUS_PANIC = 10,
} PadsetStatus;

// Overall outcome of a verification report.
typedef enum PadsetVerdict {
  PADSET_VERDICT_PASS = 0,
  PADSET_VERDICT_FAIL = 1,
  PADSET_VERDICT_INCONCLUSIVE = 2,
  PADSET_VERDICT_CERTIFIED_NECESSARY = 3,
} PadsetVerdict;

// A locally constant, compactly supported function.
typedef struct PadsetFunction PadsetFunction;

// A verification report.
typedef struct PadsetReport PadsetReport;

// A compact open subset of Q_p.
typedef struct PadsetSet PadsetSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failed call on this thread; empty after a
// success. Valid until the next call on the same thread.
const char *padset_last_error_message(void);

// Library version, statically allocated.
const char *padset_version(void);

// # Safety
// `s` must be null or a string returned by this library.
void padset_string_free(char *s);

// Parses `{"p": …, "balls": […]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum PadsetStatus padset_set_from_json(const char *json, struct PadsetSet **out);

// # Safety
// `set` must be a live handle; `out` must be writable.
enum PadsetStatus padset_set_to_json(const struct PadsetSet *set, char **out);

// Haar measure as a rational string such as `"3/2"`.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum PadsetStatus padset_set_measure(const struct PadsetSet *set, char **out);

// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum PadsetStatus padset_set_combine(const struct PadsetSet *a,
                                     const struct PadsetSet *b,
                                     enum PadsetSetOp op,
                                     struct PadsetSet **out);

// # Safety
// `set` must be null or a handle from this library, not yet freed.
void padset_set_free(struct PadsetSet *set);

// Parses `{"p": …, "terms": […]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum PadsetStatus padset_function_from_json(const char *json, struct PadsetFunction **out);

// `1_S`.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum PadsetStatus padset_function_indicator(const struct PadsetSet *set,
                                            struct PadsetFunction **out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum PadsetStatus padset_function_to_json(const struct PadsetFunction *f, char **out);

// Forward transform, or inverse when `inverse` is true.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum PadsetStatus padset_function_fourier(const struct PadsetFunction *f,
                                          bool inverse,
                                          struct PadsetFunction **out);

// Exact `∫ f conj(g)`: the cyclotomic value as JSON in `exact_json`
// (may be null) and its double-precision value in `re`, `im`.
//
// # Safety
// `f`, `g` must be live handles; `re` and `im` must be writable.
enum PadsetStatus padset_function_inner_product(const struct PadsetFunction *f,
                                                const struct PadsetFunction *g,
                                                char **exact_json,
                                                double *re,
                                                double *im);

// # Safety
// `f` must be null or a handle from this library, not yet freed.
void padset_function_free(struct PadsetFunction *f);

// The five necessary conditions for a scaling set.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum PadsetStatus padset_verify_scaling_set(const struct PadsetSet *set, struct PadsetReport **out);

// Generalized scaling set of order `order`, with automatic partition.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum PadsetStatus padset_verify_gss(const struct PadsetSet *set,
                                    uint64_t order,
                                    struct PadsetReport **out);

// Multiwavelet set given as `count` pieces.
//
// # Safety
// `pieces` must point to `count` live handles; `out` must be writable.
enum PadsetStatus padset_verify_multiwavelet_set(const struct PadsetSet *const *pieces,
                                                 size_t count,
                                                 struct PadsetReport **out);

// `#{n ∈ [0, p^{M+N}) : p^{-M} n ∈ S}`.
//
// # Safety
// `set` must be a live handle; `out` must be writable.
enum PadsetStatus padset_count_integers(const struct PadsetSet *set,
                                        int64_t m,
                                        int64_t n,
                                        uint64_t *out);

// Generates a family. `m` is ignored for Kozyrev. Writes `G`, the order
// `L` and the pieces as partition JSON.
//
// # Safety
// All out pointers must be writable.
enum PadsetStatus padset_generate_family(enum PadsetFamily family,
                                         uint64_t p,
                                         uint32_t m,
                                         struct PadsetSet **g_out,
                                         uint64_t *order_out,
                                         char **pieces_json_out);

// # Safety
// `report` must be a live handle.
enum PadsetVerdict padset_report_verdict(const struct PadsetReport *report);

// Renders as JSON (`json` true) or text.
//
// # Safety
// `report` must be a live handle; `out` must be writable.
enum PadsetStatus padset_report_render(const struct PadsetReport *report, bool json, char **out);

// # Safety
// `report` must be null or a handle from this library, not yet freed.
void padset_report_free(struct PadsetReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADSET_H */
