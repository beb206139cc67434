#ifndef ELASTOSHELL_H
#define ELASTOSHELL_H

/* Generated by cbindgen from the elastoshell-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this ABI.
 */
typedef enum EshStatus {
  /**
   * Success; out-pointers have been written.
   */
  ESH_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ESH_STATUS_NULL_ARGUMENT = 1,
  /**
   * Rejected input: parameters, orders, or mismatched handles.
   */
  ESH_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The frequency sits on an interior eigenfrequency, no solve exists.
   */
  ESH_STATUS_RESONANCE = 3,
  /**
   * The assembled system is numerically degenerate.
   */
  ESH_STATUS_NEAR_SINGULAR = 4,
  /**
   * A defect inside the library; please report it.
   */
  ESH_STATUS_INTERNAL = 5,
} EshStatus;

/**
 * A solve under one impedance condition on the interface.
 */
typedef struct EshEc EshEc;

/**
 * Expansion terms and layer profiles up to a fixed order.
 */
typedef struct EshExpansion EshExpansion;

/**
 * One modal problem: material, interface radius, degree, and forcing.
 */
typedef struct EshProblem EshProblem;

/**
 * A solved transmission problem (solid ball plus fluid shell).
 */
typedef struct EshTransmission EshTransmission;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static C string.
 */
const char *esh_version(void);

/**
 * Message for the most recent failure on the calling thread.
 *
 * The pointer stays valid until the next failing call on the same
 * thread; copy the string if it must outlive that.
 */
const char *esh_last_error_message(void);

/**
 * Creates a problem handle for one spherical-harmonic degree.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum EshStatus esh_problem_new(double rho_s,
                               double lambda,
                               double mu,
                               double rho_f,
                               double c,
                               double omega,
                               double radius,
                               double amplitude,
                               uint32_t l,
                               struct EshProblem **out);

/**
 * Releases a problem handle. Null is ignored.
 *
 * # Safety
 * `problem` must come from [`esh_problem_new`] and not have been freed.
 */
void esh_problem_free(struct EshProblem *problem);

/**
 * Normalized distance of the frequency from the nearest interior
 * eigenfrequency signature; solves abort when it is tiny.
 *
 * # Safety
 * `problem` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_resonance_margin(const struct EshProblem *problem, double *out);

/**
 * Impedance symbol of the order-`k` interface condition at thickness
 * `eps` (`k <= 3`).
 *
 * # Safety
 * `problem` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_impedance_symbol(const struct EshProblem *problem,
                                    uint32_t k,
                                    double eps,
                                    double *out);

/**
 * Acoustic layer symbol of order `k` in `1..=3` at thickness `eps`,
 * under the `+H` (`plus_curvature` true) or `-H` convention.
 *
 * # Safety
 * `problem` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_acoustic_symbol(const struct EshProblem *problem,
                                   uint32_t k,
                                   double eps,
                                   bool plus_curvature,
                                   double *out);

/**
 * Solves the transmission problem at layer thickness `eps`.
 *
 * # Safety
 * `problem` must be a live handle; `out` must point to writable storage
 * for one pointer.
 */
enum EshStatus esh_solve_transmission(const struct EshProblem *problem,
                                      double eps,
                                      struct EshTransmission **out);

/**
 * Releases a transmission handle. Null is ignored.
 *
 * # Safety
 * `solution` must come from [`esh_solve_transmission`] and not have been
 * freed.
 */
void esh_transmission_free(struct EshTransmission *solution);

/**
 * Solution coefficients: solid pressure/shear potentials `a`, `b` and
 * fluid Bessel coefficients `cj`, `cy`.
 *
 * # Safety
 * `solution` must be a live handle; the out-pointers must be writable.
 */
enum EshStatus esh_transmission_coefficients(const struct EshTransmission *solution,
                                             double *a,
                                             double *b,
                                             double *cj,
                                             double *cy);

/**
 * Condition estimate of the solved linear system.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_transmission_conditioning(const struct EshTransmission *solution, double *out);

/**
 * Largest of the four interface/outer boundary residuals.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_transmission_boundary_residual(const struct EshTransmission *solution,
                                                  double *out);

/**
 * Total displacement parts at radius `r`: coefficient `f` of the radial
 * harmonic and `g` of its surface gradient.
 *
 * # Safety
 * `solution` must be a live handle; `f` and `g` must be writable.
 */
enum EshStatus esh_transmission_displacement(const struct EshTransmission *solution,
                                             double r,
                                             double *f,
                                             double *g);

/**
 * Modal pressure coefficient of the fluid solution at radius `r`.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_transmission_pressure(const struct EshTransmission *solution,
                                         double r,
                                         double *out);

/**
 * Solves the solid-only problem under the order-`k` impedance condition
 * evaluated at thickness `eps`.
 *
 * # Safety
 * `problem` must be a live handle; `out` must point to writable storage
 * for one pointer.
 */
enum EshStatus esh_solve_ec(const struct EshProblem *problem,
                            uint32_t k,
                            double eps,
                            struct EshEc **out);

/**
 * Releases an impedance-solve handle. Null is ignored.
 *
 * # Safety
 * `solution` must come from [`esh_solve_ec`] and not have been freed.
 */
void esh_ec_free(struct EshEc *solution);

/**
 * Solid potential coefficients of the impedance solve.
 *
 * # Safety
 * `solution` must be a live handle; `a` and `b` must be writable.
 */
enum EshStatus esh_ec_coefficients(const struct EshEc *solution, double *a, double *b);

/**
 * Value of the impedance symbol the solve used.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_ec_symbol(const struct EshEc *solution, double *out);

/**
 * Condition estimate of the impedance system.
 *
 * # Safety
 * `solution` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_ec_conditioning(const struct EshEc *solution, double *out);

/**
 * Solid-norm distance between a transmission solve and an impedance
 * solve; the handles must come from the same problem.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum EshStatus esh_solid_error(const struct EshTransmission *transmission,
                               const struct EshEc *ec,
                               double *out);

/**
 * Builds the thin-layer expansion up to order `n <= 3`.
 *
 * # Safety
 * `problem` must be a live handle; `out` must point to writable storage
 * for one pointer.
 */
enum EshStatus esh_expand(const struct EshProblem *problem, uint32_t n, struct EshExpansion **out);

/**
 * Releases an expansion handle. Null is ignored.
 *
 * # Safety
 * `expansion` must come from [`esh_expand`] and not have been freed.
 */
void esh_expansion_free(struct EshExpansion *expansion);

/**
 * Solid potential coefficients of expansion term `j`.
 *
 * # Safety
 * `expansion` must be a live handle; `a` and `b` must be writable.
 */
enum EshStatus esh_expansion_coefficients(const struct EshExpansion *expansion,
                                          uint32_t j,
                                          double *a,
                                          double *b);

/**
 * Interface displacement datum `gamma_j` feeding profile `j + 1`.
 *
 * # Safety
 * `expansion` must be a live handle; `out` must be writable.
 */
enum EshStatus esh_expansion_gamma(const struct EshExpansion *expansion, uint32_t j, double *out);

/**
 * Remainder norms after subtracting the order-`n` partial sums from a
 * transmission solve: solid norm and weighted fluid norm.
 *
 * # Safety
 * Both handles must be live; `solid` and `fluid` must be writable.
 */
enum EshStatus esh_remainder(const struct EshTransmission *transmission,
                             const struct EshExpansion *expansion,
                             uint32_t n,
                             double *solid,
                             double *fluid);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ELASTOSHELL_H */
