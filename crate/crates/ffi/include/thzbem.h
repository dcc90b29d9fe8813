#ifndef THZBEM_H
#define THZBEM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThzCurve {
  THZ_CURVE_CIRCLE = 0,
  THZ_CURVE_ELLIPSE = 1,
  THZ_CURVE_AIRFOIL = 2,
} ThzCurve;

typedef enum ThzStatus {
  THZ_STATUS_OK = 0,
  THZ_STATUS_NULL_POINTER = 1,
  THZ_STATUS_INVALID_ARGUMENT = 2,
  THZ_STATUS_GEOMETRY = 3,
  THZ_STATUS_COMPRESSION = 4,
  THZ_STATUS_SOLVER = 5,
  THZ_STATUS_MEMORY = 6,
  THZ_STATUS_PANIC = 7,
} ThzStatus;

typedef enum ThzUnknown {
  // Metal surface current j = H_t [A/m].
  THZ_UNKNOWN_METAL_J = 0,
  // Skin electric unknown j = −H_t [A/m].
  THZ_UNKNOWN_SKIN_J = 1,
  // Skin magnetic unknown m = −E_z [V/m].
  THZ_UNKNOWN_SKIN_M = 2,
} ThzUnknown;

// Boundary mesh.
typedef struct ThzMesh ThzMesh;

// Solved scenario for a single incident wave.
typedef struct ThzSolution ThzSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *thz_last_error(void);

// Builds a closed curve mesh with `n` elements. `aspect_ratio` applies to
// ellipses only.
//
// # Safety
// `out` must be a valid pointer to writable storage for a handle.
enum ThzStatus thz_mesh_curve(enum ThzCurve curve,
                              double perimeter,
                              double aspect_ratio,
                              size_t n,
                              struct ThzMesh **out);

// Mesh from `n` counter-clockwise nodes given as interleaved x, y pairs.
//
// # Safety
// `xy` must point to `2 * n` readable doubles and `out` to writable storage.
enum ThzStatus thz_mesh_from_nodes(const double *xy, size_t n, struct ThzMesh **out);

// Number of nodes, 0 for a null handle.
//
// # Safety
// `mesh` must be null or a live handle.
size_t thz_mesh_len(const struct ThzMesh *mesh);

// Polygonal perimeter in meters, NaN for a null handle.
//
// # Safety
// `mesh` must be null or a live handle.
double thz_mesh_perimeter(const struct ThzMesh *mesh);

// # Safety
// `mesh` must be null or a handle not yet freed.
void thz_mesh_free(struct ThzMesh *mesh);

// Solves the PEC problem for a TM plane wave in vacuum at wavenumber
// `k0`. `tolerance > 0` selects the fast direct solver with the given
// skeleton tolerance and seed; `tolerance == 0` selects dense LU.
//
// # Safety
// `mesh` must be a live handle and `out` writable storage for a handle.
enum ThzStatus thz_pec_solve(const struct ThzMesh *mesh,
                             double k0,
                             double angle,
                             double amplitude,
                             double tolerance,
                             uint64_t seed,
                             struct ThzSolution **out);

// Solves the penetrable (PMCHWT) problem for a TM plane wave at
// `frequency` in Hz, relative permittivity `eps_re + j eps_im` inside.
//
// # Safety
// `mesh` must be a live handle and `out` writable storage for a handle.
enum ThzStatus thz_penetrable_solve(const struct ThzMesh *mesh,
                                    double frequency,
                                    double eps_re,
                                    double eps_im,
                                    double angle,
                                    double amplitude,
                                    struct ThzSolution **out);

// Copies one unknown into `re`/`im`, each of length `len` equal to the
// mesh size.
//
// # Safety
// `solution` must be a live handle; `re` and `im` must hold `len` doubles.
enum ThzStatus thz_solution_unknown(const struct ThzSolution *solution,
                                    enum ThzUnknown which,
                                    double *re,
                                    double *im,
                                    size_t len);

// Skeleton rank of the metal block; 0 for dense or absent.
//
// # Safety
// `solution` must be null or a live handle.
size_t thz_solution_rank(const struct ThzSolution *solution);

// Largest relative residual over the solved blocks; NaN for null.
//
// # Safety
// `solution` must be null or a live handle.
double thz_solution_residual(const struct ThzSolution *solution);

// # Safety
// `solution` must be null or a handle not yet freed.
void thz_solution_free(struct ThzSolution *solution);

// 1/|Im k| of the double-Debye skin model at `frequency`, in meters.
//
// # Safety
// `out` must point to a writable double.
enum ThzStatus thz_skin_penetration_length(double frequency, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THZBEM_H */
