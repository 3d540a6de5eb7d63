#ifndef POINCARE_H
#define POINCARE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PoincareStatus {
  PoincareStatus_Ok = 0,
  PoincareStatus_NullPointer = 1,
  PoincareStatus_InvalidUtf8 = 2,
  /**
   * The input is not valid job JSON.
   */
  PoincareStatus_Parse = 3,
  /**
   * The input parsed but failed a geometric or combinatorial check.
   */
  PoincareStatus_Validation = 4,
  PoincareStatus_TileCap = 5,
  /**
   * The verification of the local tessellation failed.
   */
  PoincareStatus_VerificationFailed = 6,
  PoincareStatus_Panic = 7,
} PoincareStatus;

typedef enum PoincareFormat {
  PoincareFormat_Json = 0,
  PoincareFormat_Gap = 1,
} PoincareFormat;

/**
 * Opaque handle to a computed domain and presentation.
 */
typedef struct PoincareDomain PoincareDomain;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a job and runs the pipeline. On success `*out` receives a handle
 * to release with [`poincare_domain_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PoincareStatus poincare_domain_from_json(const char *json, struct PoincareDomain **out);

/**
 * # Safety
 * `domain` must come from [`poincare_domain_from_json`] and not be used afterwards.
 */
void poincare_domain_free(struct PoincareDomain *domain);

/**
 * Number of generators of the presentation, or 0 for a null handle.
 *
 * # Safety
 * `domain` must be null or a live handle.
 */
uintptr_t poincare_generator_count(const struct PoincareDomain *domain);

/**
 * Number of relations of the presentation, or 0 for a null handle.
 *
 * # Safety
 * `domain` must be null or a live handle.
 */
uintptr_t poincare_relation_count(const struct PoincareDomain *domain);

/**
 * Writes the presentation as JSON or as a GAP session.
 *
 * # Safety
 * `domain` must be a live handle and `out` a valid pointer.
 */
enum PoincareStatus poincare_present(const struct PoincareDomain *domain,
                                     enum PoincareFormat format,
                                     char **out);

/**
 * Samples the local tessellation; `*passed` tells whether every check held.
 *
 * # Safety
 * `domain` must be a live handle and `passed` a valid pointer.
 */
enum PoincareStatus poincare_verify(const struct PoincareDomain *domain,
                                    uintptr_t samples,
                                    bool *passed);

/**
 * Factors the element named by `word` (in the input generators) into the
 * presentation's generators; `*out` receives the word.
 *
 * # Safety
 * `domain` must be a live handle, `word` a NUL-terminated string and `out` a valid pointer.
 */
enum PoincareStatus poincare_factor(const struct PoincareDomain *domain,
                                    const char *word,
                                    uint64_t seed,
                                    char **out);

/**
 * The last error message on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *poincare_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void poincare_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POINCARE_H */
