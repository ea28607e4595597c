/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#ifndef BREUIL_H
#define BREUIL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `BREUIL_STATUS_OK` is zero; every other value names the
 * failure class.
 */
typedef enum BreuilStatus {
  BREUIL_STATUS_OK = 0,
  BREUIL_STATUS_NULL_POINTER = 1,
  BREUIL_STATUS_INVALID_UTF8 = 2,
  BREUIL_STATUS_PANIC = 3,
  BREUIL_STATUS_PARAM_VIOLATION = 10,
  BREUIL_STATUS_PARAM_MISMATCH = 11,
  BREUIL_STATUS_NOT_A_UNIT = 12,
  BREUIL_STATUS_INVALID_LEVELS = 13,
  BREUIL_STATUS_NOT_INVERTIBLE = 14,
  BREUIL_STATUS_DIMENSION_MISMATCH = 15,
  BREUIL_STATUS_NOT_A_PRESENTATION = 16,
  BREUIL_STATUS_NOT_A_MORPHISM = 17,
  BREUIL_STATUS_NOT_EXACT = 18,
  BREUIL_STATUS_REGIME_VIOLATION = 19,
  BREUIL_STATUS_LEVEL_VIOLATION = 20,
  BREUIL_STATUS_RANK_VIOLATION = 21,
  BREUIL_STATUS_VERIFICATION_FAILED = 22,
  BREUIL_STATUS_INTERNAL_CHECK_FAILED = 23,
  BREUIL_STATUS_CRITERIA_DISAGREE = 24,
  BREUIL_STATUS_SEARCH_INCONCLUSIVE = 25,
  BREUIL_STATUS_PARSE_ERROR = 26,
  BREUIL_STATUS_VALIDATION_ERROR = 27,
} BreuilStatus;

/**
 * Opaque handle to a validated object.
 */
typedef struct BreuilModule BreuilModule;

/**
 * Opaque handle to a morphism together with its endpoints.
 */
typedef struct BreuilMorphism BreuilMorphism;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or the empty string.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *breuil_last_error(void);

/**
 * Releases a string returned by the library.
 */
void breuil_string_free(char *s);

/**
 * Parses a `breuil-phimod/1` document. A monodromy operator, if present,
 * is validated and then dropped.
 */
enum BreuilStatus breuil_module_parse(const char *json, struct BreuilModule **out);

/**
 * A seeded random object with `c = 1`.
 */
enum BreuilStatus breuil_module_random(uint64_t seed,
                                       uint32_t p,
                                       uint32_t e,
                                       uint32_t r,
                                       size_t s,
                                       size_t rank,
                                       struct BreuilModule **out);

void breuil_module_free(struct BreuilModule *m);

/**
 * Rank of `M`, or 0 for a null handle.
 */
size_t breuil_module_rank(const struct BreuilModule *m);

/**
 * Canonical `breuil-phimod/1` text; free with [`breuil_string_free`].
 */
enum BreuilStatus breuil_module_to_json(const struct BreuilModule *m, char **out);

enum BreuilStatus breuil_module_dual(const struct BreuilModule *m, struct BreuilModule **out);

enum BreuilStatus breuil_module_is_unipotent(const struct BreuilModule *m, bool *out);

/**
 * Writes the ranks of `M^m`, `M^nil`, `M^uni`, `M^et` to `out[0..4]`;
 * `out` must have room for four values.
 */
enum BreuilStatus breuil_module_parts_ranks(const struct BreuilModule *m, size_t *out);

/**
 * `F_p`-dimension of `Hom(M1, M2)`.
 */
enum BreuilStatus breuil_hom_dimension(const struct BreuilModule *m1,
                                       const struct BreuilModule *m2,
                                       size_t *out);

/**
 * Writes whether `M1 ≅ M2`. Fails with `SEARCH_INCONCLUSIVE` when the
 * morphism space is too large to decide.
 */
enum BreuilStatus breuil_modules_isomorphic(const struct BreuilModule *m1,
                                            const struct BreuilModule *m2,
                                            bool *out);

enum BreuilStatus breuil_module_truncate(const struct BreuilModule *m,
                                         size_t s,
                                         struct BreuilModule **out);

enum BreuilStatus breuil_module_lift(const struct BreuilModule *m,
                                     size_t t,
                                     struct BreuilModule **out);

/**
 * `dim_{F_p} Fil^a T_s / Fil^b T_s` for `Fil^a T_s = u^{ea} T_s`.
 */
enum BreuilStatus breuil_fil_quotient_dim(uint32_t a,
                                          uint32_t b,
                                          uint32_t e,
                                          size_t s,
                                          size_t *out);

/**
 * Parses a `breuil-morphism/1` document with embedded endpoints.
 */
enum BreuilStatus breuil_morphism_parse(const char *json, struct BreuilMorphism **out);

void breuil_morphism_free(struct BreuilMorphism *f);

enum BreuilStatus breuil_morphism_to_json(const struct BreuilMorphism *f, char **out);

enum BreuilStatus breuil_morphism_is_zero(const struct BreuilMorphism *f, bool *out);

/**
 * Copies the source (`which = 0`) or target (any other value) of `f`.
 */
enum BreuilStatus breuil_morphism_endpoint(const struct BreuilMorphism *f,
                                           uint32_t which,
                                           struct BreuilModule **out);

/**
 * Kernel object and its inclusion. Either output may be null.
 */
enum BreuilStatus breuil_morphism_kernel(const struct BreuilMorphism *f,
                                         struct BreuilModule **object,
                                         struct BreuilMorphism **inclusion);

/**
 * Cokernel object and its projection. Either output may be null.
 */
enum BreuilStatus breuil_morphism_cokernel(const struct BreuilMorphism *f,
                                           struct BreuilModule **object,
                                           struct BreuilMorphism **projection);

/**
 * Image object and its inclusion into the target. Either output may be null.
 */
enum BreuilStatus breuil_morphism_image(const struct BreuilMorphism *f,
                                        struct BreuilModule **object,
                                        struct BreuilMorphism **inclusion);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BREUIL_H */
