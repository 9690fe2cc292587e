#ifndef CARPETDIM_H
#define CARPETDIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. The first five match the exit codes of the command line tool.
typedef enum CdStatus {
  CD_STATUS_OK = 0,
  CD_STATUS_IO = 1,
  CD_STATUS_INVALID = 2,
  CD_STATUS_BUDGET = 3,
  CD_STATUS_NUMERIC = 4,
  CD_STATUS_NULL_POINTER = 5,
  CD_STATUS_PANIC = 6,
} CdStatus;

// Opaque handle to a validated carpet system.
typedef struct CdSystem CdSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a JSON system description. On success `*out` owns a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum CdStatus cd_system_parse(const char *json, struct CdSystem **out);

// Releases a handle. Passing null is a no-op.
//
// # Safety
// `handle` must come from [`cd_system_parse`] and not be used afterwards.
void cd_system_free(struct CdSystem *handle);

// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum CdStatus cd_system_vertex_count(const struct CdSystem *handle, uintptr_t *out);

// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum CdStatus cd_system_edge_count(const struct CdSystem *handle, uintptr_t *out);

// Box-counting dimension of the union of all vertex sets.
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum CdStatus cd_box_dimension(const struct CdSystem *handle, double *out);

// Rigorous bracket `[lo, hi]` for the Assouad dimension. `depth` controls
// how far fiber entropies are refined.
//
// # Safety
// `handle` must be a live handle; `lo` and `hi` valid pointers.
enum CdStatus cd_assouad_bracket(const struct CdSystem *handle,
                                 uintptr_t depth,
                                 double *lo,
                                 double *hi);

// Upper estimate of the lower dimension from depths `1..=k_max`.
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum CdStatus cd_lower_estimate(const struct CdSystem *handle, uintptr_t k_max, double *out);

// Full dimension report as a JSON string. Release it with [`cd_string_free`].
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum CdStatus cd_report_json(const struct CdSystem *handle,
                             uintptr_t k_max,
                             double tol,
                             char **out);

// Number of level-`k` approximate squares meeting the attractor.
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum CdStatus cd_occupancy_count(const struct CdSystem *handle, uintptr_t k, uint64_t *out);

// Releases a string returned by this library. Passing null is a no-op.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void cd_string_free(char *s);

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next call into the library from the same thread.
const char *cd_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARPETDIM_H */
