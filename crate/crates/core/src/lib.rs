//! Modal solvers for a solid elastic sphere coated by a thin fluid shell.
//!
//! A time-harmonic elastic ball of radius `R` is surrounded by a fluid
//! annulus of thickness `eps` with a pressure-release outer boundary. On
//! each spherical-harmonic mode the coupled problem reduces to small dense
//! systems in the radial Bessel coefficients, which makes the geometry a
//! clean testbed for *impedance conditions*: surface operators posed on the
//! wet interface that replace the fluid layer at increasing orders of
//! accuracy in `eps`.
//!
//! The crate provides
//!
//! * spherical Bessel machinery ([`bessel`]),
//! * the spherical interface geometry and the scaled thin-layer expansion
//!   of the Helmholtz operator ([`geometry`]),
//! * per-mode elastic and fluid fields with tractions and a manufactured
//!   interior forcing ([`elastic`], [`fluid`]),
//! * the impedance symbols of orders 0..=3 and their acoustic counterparts
//!   ([`operators`]),
//! * exact transmission solves, impedance-condition solves, and the
//!   thin-layer multiscale expansion ([`solver`]),
//! * norms, convergence-rate fits, and a deterministic sweep driver
//!   ([`norms`], [`rates`], [`sweep`]).
//!
//! The `elastoshell` binary exposes the same functionality on the command
//! line; see the repository README for usage.

pub mod bessel;
pub mod config;
pub mod elastic;
pub mod error;
pub mod fluid;
pub mod geometry;
pub mod norms;
pub mod operators;
pub mod poly;
pub mod quadrature;
pub mod rates;
pub mod solver;
pub mod sweep;

mod linalg;

pub use config::SweepConfig;
pub use elastic::{ManufacturedForcing, MaterialParams, ModalSolidField};
pub use error::Error;
pub use fluid::ModalFluidField;
pub use geometry::{SphereGeometry, Surface};
pub use norms::{ModalNorm, NormKind, NormRule};
pub use operators::{
    acoustic_symbol, acoustic_symbol_signed, compare_operators, elasto_symbol, OperatorSymbol,
    SignFlag, SymbolFamily,
};
pub use rates::{fit_rate, RateFit, RateOutcome};
pub use solver::{
    multiscale_terms, remainder, resonance_margin, solve_ec, solve_transmission,
    BoundaryResiduals, EcSolution, ExpansionSet, TransmissionSolution,
};
pub use sweep::{run_sweep, SweepOutcome, SweepRecord};

/// Smallest admissible resonance margin for solves and sweeps.
pub const RESONANCE_MARGIN_TOL: f64 = 1e-6;

/// Condition-estimate ceiling beyond which assembled systems are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;
