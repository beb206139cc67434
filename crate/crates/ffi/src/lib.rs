//! C ABI over the modal solvers.
//!
//! The surface follows the usual handle pattern: constructors allocate
//! opaque objects behind pointers, every fallible call returns an
//! [`EshStatus`], and results travel through out-pointers that are only
//! written on `ESH_STATUS_OK`. A human-readable message for the most
//! recent failure on the current thread is available from
//! [`esh_last_error_message`]. The matching header is generated into
//! `include/elastoshell.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use elastoshell::elastic::{manufactured_forcing, ManufacturedForcing, MaterialParams};
use elastoshell::geometry::SphereGeometry;
use elastoshell::norms::{solid_error_norm, NormRule};
use elastoshell::operators::{acoustic_symbol_signed, elasto_symbol, SignFlag};
use elastoshell::solver::{
    multiscale_terms, remainder, resonance_margin, solve_ec, solve_transmission, EcSolution,
    ExpansionSet, TransmissionSolution,
};
use elastoshell::Error;

/// Result of every fallible call in this ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EshStatus {
    /// Success; out-pointers have been written.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Rejected input: parameters, orders, or mismatched handles.
    InvalidArgument = 2,
    /// The frequency sits on an interior eigenfrequency, no solve exists.
    Resonance = 3,
    /// The assembled system is numerically degenerate.
    NearSingular = 4,
    /// A defect inside the library; please report it.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn fail(err: &Error) -> EshStatus {
    set_error(&err.to_string());
    match err {
        Error::Resonance { .. } => EshStatus::Resonance,
        Error::NearSingular { .. } => EshStatus::NearSingular,
        _ => EshStatus::InvalidArgument,
    }
}

fn null_arg(name: &str) -> EshStatus {
    set_error(&format!("null pointer argument: {name}"));
    EshStatus::NullArgument
}

fn guarded(body: impl FnOnce() -> EshStatus) -> EshStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            EshStatus::Internal
        }
    }
}

/// One modal problem: material, interface radius, degree, and forcing.
pub struct EshProblem {
    mat: MaterialParams,
    radius: f64,
    degree: u32,
    forcing: ManufacturedForcing,
}

/// A solved transmission problem (solid ball plus fluid shell).
pub struct EshTransmission {
    inner: TransmissionSolution,
}

/// A solve under one impedance condition on the interface.
pub struct EshEc {
    inner: EcSolution,
}

/// Expansion terms and layer profiles up to a fixed order.
pub struct EshExpansion {
    inner: ExpansionSet,
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn esh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on the calling thread.
///
/// The pointer stays valid until the next failing call on the same
/// thread; copy the string if it must outlive that.
#[no_mangle]
pub extern "C" fn esh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates a problem handle for one spherical-harmonic degree.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn esh_problem_new(
    rho_s: f64,
    lambda: f64,
    mu: f64,
    rho_f: f64,
    c: f64,
    omega: f64,
    radius: f64,
    amplitude: f64,
    l: u32,
    out: *mut *mut EshProblem,
) -> EshStatus {
    guarded(|| {
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        let mat = match MaterialParams::new(rho_s, lambda, mu, rho_f, c, omega) {
            Ok(mat) => mat,
            Err(e) => return fail(&e),
        };
        let forcing = match manufactured_forcing(&mat, radius, l, amplitude) {
            Ok(forcing) => forcing,
            Err(e) => return fail(&e),
        };
        *out = Box::into_raw(Box::new(EshProblem {
            mat,
            radius,
            degree: l,
            forcing,
        }));
        EshStatus::Ok
    })
}

/// Releases a problem handle. Null is ignored.
///
/// # Safety
/// `problem` must come from [`esh_problem_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn esh_problem_free(problem: *mut EshProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Normalized distance of the frequency from the nearest interior
/// eigenfrequency signature; solves abort when it is tiny.
///
/// # Safety
/// `problem` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_resonance_margin(
    problem: *const EshProblem,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(problem) = problem.as_ref() else {
            return null_arg("problem");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        match resonance_margin(&problem.mat, problem.radius, problem.degree) {
            Ok(margin) => {
                *out = margin;
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Impedance symbol of the order-`k` interface condition at thickness
/// `eps` (`k <= 3`).
///
/// # Safety
/// `problem` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_impedance_symbol(
    problem: *const EshProblem,
    k: u32,
    eps: f64,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(problem) = problem.as_ref() else {
            return null_arg("problem");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        let geom = match SphereGeometry::new(problem.radius, 0.0) {
            Ok(geom) => geom,
            Err(e) => return fail(&e),
        };
        match elasto_symbol(k, eps, &geom, &problem.mat, problem.degree) {
            Ok(value) => {
                *out = value;
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Acoustic layer symbol of order `k` in `1..=3` at thickness `eps`,
/// under the `+H` (`plus_curvature` true) or `-H` convention.
///
/// # Safety
/// `problem` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_acoustic_symbol(
    problem: *const EshProblem,
    k: u32,
    eps: f64,
    plus_curvature: bool,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(problem) = problem.as_ref() else {
            return null_arg("problem");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        let geom = match SphereGeometry::new(problem.radius, 0.0) {
            Ok(geom) => geom,
            Err(e) => return fail(&e),
        };
        let flag = if plus_curvature {
            SignFlag::Plus
        } else {
            SignFlag::Minus
        };
        match acoustic_symbol_signed(k, eps, &geom, &problem.mat, problem.degree, flag) {
            Ok(value) => {
                *out = value;
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Solves the transmission problem at layer thickness `eps`.
///
/// # Safety
/// `problem` must be a live handle; `out` must point to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn esh_solve_transmission(
    problem: *const EshProblem,
    eps: f64,
    out: *mut *mut EshTransmission,
) -> EshStatus {
    guarded(|| {
        let Some(problem) = problem.as_ref() else {
            return null_arg("problem");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        let geom = match SphereGeometry::new(problem.radius, eps) {
            Ok(geom) => geom,
            Err(e) => return fail(&e),
        };
        match solve_transmission(&problem.mat, &geom, problem.degree, &problem.forcing) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(EshTransmission { inner }));
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a transmission handle. Null is ignored.
///
/// # Safety
/// `solution` must come from [`esh_solve_transmission`] and not have been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn esh_transmission_free(solution: *mut EshTransmission) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Solution coefficients: solid pressure/shear potentials `a`, `b` and
/// fluid Bessel coefficients `cj`, `cy`.
///
/// # Safety
/// `solution` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_transmission_coefficients(
    solution: *const EshTransmission,
    a: *mut f64,
    b: *mut f64,
    cj: *mut f64,
    cy: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let (Some(a), Some(b), Some(cj), Some(cy)) =
            (a.as_mut(), b.as_mut(), cj.as_mut(), cy.as_mut())
        else {
            return null_arg("coefficient out-pointer");
        };
        *a = solution.inner.solid().coeff_p();
        *b = solution.inner.solid().coeff_sv();
        *cj = solution.inner.fluid().coeff_j();
        *cy = solution.inner.fluid().coeff_y();
        EshStatus::Ok
    })
}

/// Condition estimate of the solved linear system.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_transmission_conditioning(
    solution: *const EshTransmission,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        *out = solution.inner.conditioning();
        EshStatus::Ok
    })
}

/// Largest of the four interface/outer boundary residuals.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_transmission_boundary_residual(
    solution: *const EshTransmission,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        *out = solution.inner.boundary_residuals().max();
        EshStatus::Ok
    })
}

/// Total displacement parts at radius `r`: coefficient `f` of the radial
/// harmonic and `g` of its surface gradient.
///
/// # Safety
/// `solution` must be a live handle; `f` and `g` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_transmission_displacement(
    solution: *const EshTransmission,
    r: f64,
    f: *mut f64,
    g: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let (Some(f), Some(g)) = (f.as_mut(), g.as_mut()) else {
            return null_arg("displacement out-pointer");
        };
        *f = solution.inner.total_radial(r);
        *g = solution.inner.total_tangential(r);
        EshStatus::Ok
    })
}

/// Modal pressure coefficient of the fluid solution at radius `r`.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_transmission_pressure(
    solution: *const EshTransmission,
    r: f64,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        *out = solution.inner.fluid().pressure(r);
        EshStatus::Ok
    })
}

/// Solves the solid-only problem under the order-`k` impedance condition
/// evaluated at thickness `eps`.
///
/// # Safety
/// `problem` must be a live handle; `out` must point to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn esh_solve_ec(
    problem: *const EshProblem,
    k: u32,
    eps: f64,
    out: *mut *mut EshEc,
) -> EshStatus {
    guarded(|| {
        let Some(problem) = problem.as_ref() else {
            return null_arg("problem");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        match solve_ec(
            k,
            &problem.mat,
            problem.radius,
            eps,
            problem.degree,
            &problem.forcing,
        ) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(EshEc { inner }));
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases an impedance-solve handle. Null is ignored.
///
/// # Safety
/// `solution` must come from [`esh_solve_ec`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn esh_ec_free(solution: *mut EshEc) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Solid potential coefficients of the impedance solve.
///
/// # Safety
/// `solution` must be a live handle; `a` and `b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_ec_coefficients(
    solution: *const EshEc,
    a: *mut f64,
    b: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let (Some(a), Some(b)) = (a.as_mut(), b.as_mut()) else {
            return null_arg("coefficient out-pointer");
        };
        *a = solution.inner.field().coeff_p();
        *b = solution.inner.field().coeff_sv();
        EshStatus::Ok
    })
}

/// Value of the impedance symbol the solve used.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_ec_symbol(solution: *const EshEc, out: *mut f64) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        *out = solution.inner.symbol();
        EshStatus::Ok
    })
}

/// Condition estimate of the impedance system.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_ec_conditioning(solution: *const EshEc, out: *mut f64) -> EshStatus {
    guarded(|| {
        let Some(solution) = solution.as_ref() else {
            return null_arg("solution");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        *out = solution.inner.conditioning();
        EshStatus::Ok
    })
}

/// Solid-norm distance between a transmission solve and an impedance
/// solve; the handles must come from the same problem.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_solid_error(
    transmission: *const EshTransmission,
    ec: *const EshEc,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(transmission) = transmission.as_ref() else {
            return null_arg("transmission");
        };
        let Some(ec) = ec.as_ref() else {
            return null_arg("ec");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        let radius = transmission.inner.geometry().radius();
        match solid_error_norm(
            transmission.inner.solid(),
            ec.inner.field(),
            radius,
            &NormRule::default(),
        ) {
            Ok(norm) => {
                *out = norm.value();
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Builds the thin-layer expansion up to order `n <= 3`.
///
/// # Safety
/// `problem` must be a live handle; `out` must point to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn esh_expand(
    problem: *const EshProblem,
    n: u32,
    out: *mut *mut EshExpansion,
) -> EshStatus {
    guarded(|| {
        let Some(problem) = problem.as_ref() else {
            return null_arg("problem");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        let geom = match SphereGeometry::new(problem.radius, 0.0) {
            Ok(geom) => geom,
            Err(e) => return fail(&e),
        };
        match multiscale_terms(&problem.mat, &geom, problem.degree, &problem.forcing, n) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(EshExpansion { inner }));
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases an expansion handle. Null is ignored.
///
/// # Safety
/// `expansion` must come from [`esh_expand`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn esh_expansion_free(expansion: *mut EshExpansion) {
    if !expansion.is_null() {
        drop(Box::from_raw(expansion));
    }
}

/// Solid potential coefficients of expansion term `j`.
///
/// # Safety
/// `expansion` must be a live handle; `a` and `b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_expansion_coefficients(
    expansion: *const EshExpansion,
    j: u32,
    a: *mut f64,
    b: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(expansion) = expansion.as_ref() else {
            return null_arg("expansion");
        };
        let (Some(a), Some(b)) = (a.as_mut(), b.as_mut()) else {
            return null_arg("coefficient out-pointer");
        };
        if j as usize > expansion.inner.order() {
            set_error(&format!(
                "expansion holds terms 0..={}, term {j} requested",
                expansion.inner.order()
            ));
            return EshStatus::InvalidArgument;
        }
        *a = expansion.inner.term(j as usize).coeff_p();
        *b = expansion.inner.term(j as usize).coeff_sv();
        EshStatus::Ok
    })
}

/// Interface displacement datum `gamma_j` feeding profile `j + 1`.
///
/// # Safety
/// `expansion` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_expansion_gamma(
    expansion: *const EshExpansion,
    j: u32,
    out: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(expansion) = expansion.as_ref() else {
            return null_arg("expansion");
        };
        let Some(out) = out.as_mut() else {
            return null_arg("out");
        };
        if j as usize > expansion.inner.order() {
            set_error(&format!(
                "expansion holds terms 0..={}, gamma {j} requested",
                expansion.inner.order()
            ));
            return EshStatus::InvalidArgument;
        }
        *out = expansion.inner.gamma(j as usize);
        EshStatus::Ok
    })
}

/// Remainder norms after subtracting the order-`n` partial sums from a
/// transmission solve: solid norm and weighted fluid norm.
///
/// # Safety
/// Both handles must be live; `solid` and `fluid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn esh_remainder(
    transmission: *const EshTransmission,
    expansion: *const EshExpansion,
    n: u32,
    solid: *mut f64,
    fluid: *mut f64,
) -> EshStatus {
    guarded(|| {
        let Some(transmission) = transmission.as_ref() else {
            return null_arg("transmission");
        };
        let Some(expansion) = expansion.as_ref() else {
            return null_arg("expansion");
        };
        let (Some(solid), Some(fluid)) = (solid.as_mut(), fluid.as_mut()) else {
            return null_arg("remainder out-pointer");
        };
        let eps = transmission.inner.geometry().thickness();
        match remainder(&transmission.inner, &expansion.inner, eps, n as usize) {
            Ok((s, f)) => {
                *solid = s.value();
                *fluid = f.value();
                EshStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
