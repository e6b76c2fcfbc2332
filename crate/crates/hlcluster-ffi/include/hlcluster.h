#ifndef HLCLUSTER_H
#define HLCLUSTER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HlStatus {
  HL_STATUS_OK = 0,
  HL_STATUS_NULL_POINTER = 1,
  HL_STATUS_INVALID_ARGUMENT = 2,
  HL_STATUS_NO_SUCH_VERTEX = 3,
  HL_STATUS_FROZEN_VERTEX = 4,
  HL_STATUS_INCOMPARABLE = 5,
  HL_STATUS_INTERNAL = 6,
} HlStatus;

/**
 * Opaque tracked seed.
 */
typedef struct HlSeed HlSeed;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The last error message on this thread as a new string, or NULL when the last call
 * succeeded. Free it with [`hl_string_free`].
 */
char *hl_last_error(void);

/**
 * # Safety
 * `s` is NULL or a string returned by this library that has not been freed yet.
 */
void hl_string_free(char *s);

/**
 * Q_xi labeled at depth `r`.
 *
 * # Safety
 * `xi` points to `n` readable values and `out` is writable.
 */
enum HlStatus hl_seed_from_xi(const int64_t *xi, size_t n, int64_t r, struct HlSeed **out);

/**
 * The initial grid seed on `n` columns and `ell + 1` rows.
 *
 * # Safety
 * `out` is writable.
 */
enum HlStatus hl_seed_grid(size_t n, int64_t ell, struct HlSeed **out);

/**
 * # Safety
 * `seed` is NULL or a live handle from this library.
 */
void hl_seed_free(struct HlSeed *seed);

/**
 * # Safety
 * `seed` is a live handle and `vertex` a NUL-terminated string.
 */
enum HlStatus hl_seed_mutate(struct HlSeed *seed, const char *vertex);

/**
 * Reverts the last mutation; `*undone` is set to 0 when the log was empty.
 *
 * # Safety
 * `seed` is a live handle and `undone` is NULL or writable.
 */
enum HlStatus hl_seed_undo(struct HlSeed *seed, int32_t *undone);

/**
 * Number of exchange records in the seed's log.
 *
 * # Safety
 * `seed` is NULL or a live handle.
 */
size_t hl_seed_log_len(const struct HlSeed *seed);

/**
 * The seed as JSON: quiver, labels and exchange log.
 *
 * # Safety
 * `seed` is a live handle and `out` is writable.
 */
enum HlStatus hl_seed_to_json(const struct HlSeed *seed, char **out);

/**
 * The label at `vertex`, printed as a monomial.
 *
 * # Safety
 * `seed` is a live handle, `vertex` a NUL-terminated string and `out` writable.
 */
enum HlStatus hl_seed_label(const struct HlSeed *seed, const char *vertex, char **out);

/**
 * The generalized HL monomial for `k` factors at depth `r`.
 *
 * # Safety
 * `idx`, `as_` and `rs` each point to `k` readable values and `out` is writable.
 */
enum HlStatus hl_ghl_monomial(const size_t *idx,
                              const int64_t *as_,
                              const int64_t *rs,
                              size_t k,
                              int64_t r,
                              char **out);

/**
 * Runs the arrow suite on one height function; `*passed` is 1 when every check holds.
 *
 * # Safety
 * `xi` points to `n` readable values and `passed` is writable.
 */
enum HlStatus hl_verify_arrows(const int64_t *xi, size_t n, int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HLCLUSTER_H */
