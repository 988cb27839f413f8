/* C interface to the heightscout exact lattice-arithmetic library. */

#pragma once

/* Generated with cbindgen:0.27.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define HS_OK 0

#define HS_ERR_NULL_POINTER 1

#define HS_ERR_PARSE 2

#define HS_ERR_DIMENSION 3

#define HS_ERR_RANK 4

#define HS_ERR_DOMAIN 5

#define HS_ERR_BUDGET 6

#define HS_ERR_NO_RESULT 7

#define HS_ERR_INTERNAL 8

// Opaque lattice handle.
typedef struct HsLattice HsLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message for this thread as a fresh string (never null;
// empty when no error is recorded). Free with `hs_string_free`.
char *hs_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must have been returned by a heightscout function and not yet
// freed.
void hs_string_free(char *s);

// Parses a lattice from its JSON interchange form
// `{"ambient": N, "basis": {"rows":, "cols":, "data": [["..."]]}}`.
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` must be a valid
// pointer to receive the handle.
int32_t hs_lattice_parse(const char *json, struct HsLattice **out);

// Releases a lattice handle. Null is ignored.
//
// # Safety
// `lat` must have come from `hs_lattice_parse` and not yet be freed.
void hs_lattice_free(struct HsLattice *lat);

// Ambient dimension of the lattice; zero for a null handle.
//
// # Safety
// `lat` must be a live handle or null.
uintptr_t hs_lattice_ambient_dim(const struct HsLattice *lat);

// Rank of the lattice; zero for a null handle.
//
// # Safety
// `lat` must be a live handle or null.
uintptr_t hs_lattice_rank(const struct HsLattice *lat);

// Height of the lattice as a decimal string.
//
// # Safety
// `lat` must be a live handle; `out` must be valid for writing.
int32_t hs_lattice_height(const struct HsLattice *lat, char **out);

// Grassmann coordinates as a JSON array of decimal strings, in
// lexicographic order of the row subsets.
//
// # Safety
// `lat` must be a live handle; `out` must be valid for writing.
int32_t hs_lattice_grassmann(const struct HsLattice *lat, char **out);

// Exact membership test; `point_json` is a JSON array of decimal strings.
// Writes 1 or 0 through `contains_out`.
//
// # Safety
// `lat` must be a live handle; `point_json` a valid string;
// `contains_out` valid for writing.
int32_t hs_lattice_contains(const struct HsLattice *lat,
                            const char *point_json,
                            int32_t *contains_out);

// Minor-duality certificate of the lattice as JSON.
//
// # Safety
// `lat` must be a live handle; `out` must be valid for writing.
int32_t hs_lattice_duality(const struct HsLattice *lat, char **out);

// Cube-count envelope: lattice and cube as interchange JSON, result as
// envelope JSON (`exact` omitted when the budget is exceeded).
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_count_cube(const char *lattice_json, const char *cube_json, uint64_t budget, char **out);

// Box-count envelope for an upper-triangular rational transform.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_count_box(const char *matrix_json, const char *box_json, uint64_t budget, char **out);

// Taxicab-ball point count: `r` is a rational string, the count comes
// back as a decimal string.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_count_length_ball(uintptr_t n, const char *r, char **out);

// Small-height nonvanishing point of a polynomial, as certificate JSON.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_poly_height_point(const char *poly_json, char **out);

// Small-length nonvanishing point of a homogeneous polynomial.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_poly_length_point(const char *poly_json, char **out);

// First nonvanishing point on a finite grid (JSON array of decimal
// strings); writes a JSON array, or `null` when the grid is fully
// vanishing.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_poly_grid_point(const char *poly_json, const char *grid_json, char **out);

// Small point of a lattice outside a union of proper sublattices, as
// certificate JSON. Input is `{"omega": <lattice>, "obstacles": [...]}`.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_avoid_point(const char *instance_json, uint64_t budget, char **out);

// Point where none of the given primitive forms vanish, as certificate
// JSON. Input is a JSON array of `{"coeffs": [...]}` objects.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_forms_avoid_point(const char *forms_json, uint64_t budget, char **out);

// Verifies a plank cover `{"N":, "R":, "forms": [...]}`; the result JSON
// carries `covered` and, on failure, the first uncovered `witness`.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_plank_verify(const char *cover_json, uint64_t budget, char **out);

// Exhaustive minimal cover of the radius-`radius` cube by hyperplanes of
// height at most `height_cap`; writes the cover instance JSON.
//
// # Safety
// All pointers must be valid as described at the top of this module.
int32_t hs_plank_min_cover(uintptr_t dim,
                           uint64_t radius,
                           uint64_t height_cap,
                           uint64_t budget,
                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
