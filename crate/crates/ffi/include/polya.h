#ifndef POLYA_H
#define POLYA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define POLYA_SHAPE_SECTOR 0

#define POLYA_SHAPE_BALL 1

#define POLYA_BC_DIRICHLET 0

#define POLYA_BC_NEUMANN 1

// Result of every call.
typedef enum PolyaStatus {
  POLYA_STATUS_OK = 0,
  POLYA_STATUS_NULL_POINTER = 1,
  POLYA_STATUS_INVALID_ARGUMENT = 2,
  POLYA_STATUS_UNSUPPORTED = 3,
  // A zero or eigenvalue sits on the threshold within tolerance.
  POLYA_STATUS_AMBIGUOUS_TIE = 4,
  POLYA_STATUS_NUMERICAL_FAILURE = 5,
  POLYA_STATUS_IO = 6,
  POLYA_STATUS_PANIC = 7,
} PolyaStatus;

typedef enum PolyaVerdict {
  POLYA_VERDICT_PASS = 0,
  POLYA_VERDICT_FAIL = 1,
  POLYA_VERDICT_TIE_AMBIGUOUS = 2,
} PolyaVerdict;

// Opaque memo of Bessel zero tables. Safe to share between threads.
typedef struct PolyaZeroCache PolyaZeroCache;

// A domain: `shape` is `POLYA_SHAPE_SECTOR` (angle `alpha`) or
// `POLYA_SHAPE_BALL` (dimension `dim`, 2 for the disk); `bc` is one of the
// `POLYA_BC_*` constants.
typedef struct PolyaDomain {
  uint32_t shape;
  double alpha;
  uint32_t dim;
  uint32_t bc;
} PolyaDomain;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// New in-memory cache. Release it with `polya_cache_free`.
struct PolyaZeroCache *polya_cache_new(void);

// New cache that also persists tables under the directory `dir`.
//
// # Safety
// `dir` must be a NUL-terminated string and `out` writable.
enum PolyaStatus polya_cache_new_with_dir(const char *dir, struct PolyaZeroCache **out);

// Release a cache. Null is ignored.
//
// # Safety
// `cache` must come from a constructor here and not be used afterwards.
void polya_cache_free(struct PolyaZeroCache *cache);

// `J_ν(x)` for `ν, x ≥ 0`.
//
// # Safety
// `out` must be writable.
enum PolyaStatus polya_bessel_j(double nu, double x, double *out);

// Number of zeros of `J_ν` (`neumann == 0`) or `J'_ν` (otherwise) in `[0, x]`.
//
// # Safety
// `cache` must be a live handle and `out` writable.
enum PolyaStatus polya_count_zeros(const struct PolyaZeroCache *cache,
                                   double nu,
                                   uint32_t neumann,
                                   double x,
                                   uint64_t *out);

// Weyl term `C_d |Ω| Λ^{d/2}` of a domain.
//
// # Safety
// `domain` must be readable and `out` writable.
enum PolyaStatus polya_weyl_term(const struct PolyaDomain *domain, double lambda, double *out);

// Eigenvalue count `N(Λ)` (eigenvalues `≤ Λ`, with multiplicity) and the
// Pólya margin: `weyl − N` for Dirichlet, `N − weyl` for Neumann.
// `margin` may be null.
//
// # Safety
// Pointers must be valid as described.
enum PolyaStatus polya_count(const struct PolyaZeroCache *cache,
                             const struct PolyaDomain *domain,
                             double lambda,
                             uint64_t *count,
                             double *margin);

// Pólya verdict at a single `Λ`.
//
// # Safety
// Pointers must be valid as described.
enum PolyaStatus polya_verdict(const struct PolyaZeroCache *cache,
                               const struct PolyaDomain *domain,
                               double lambda,
                               enum PolyaVerdict *out);

// Copy the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL, so
// a call with `len == 0` sizes the buffer.
//
// # Safety
// `buf` must be writable for `len` bytes or null when `len == 0`.
size_t polya_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *polya_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYA_H */
