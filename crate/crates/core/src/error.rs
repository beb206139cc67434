//! Error type shared by every module in the crate.

use thiserror::Error;

/// Unified error type for solver, operator, and I/O failures.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two modal objects that must share a mode or material do not.
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    /// The driving frequency sits too close to a traction-free
    /// eigenfrequency of the solid, violating the standing assumption that
    /// `omega^2` is not an interior eigenvalue.
    #[error(
        "resonance: omega = {omega} is within margin {margin:.3e} of a traction-free \
         eigenfrequency of the solid at mode l = {degree}; the eigenfrequency \
         assumption requires a margin above {tolerance:.1e}"
    )]
    Resonance {
        /// Driving angular frequency.
        omega: f64,
        /// Spherical-harmonic degree of the offending mode.
        degree: u32,
        /// Normalized determinant of the traction-free system.
        margin: f64,
        /// Margin threshold that was violated.
        tolerance: f64,
    },

    /// An assembled linear system is numerically singular.
    #[error(
        "numerical failure: condition estimate {condition:.3e} exceeds {limit:.1e}; \
         the frequency may violate the eigenfrequency assumption"
    )]
    NearSingular {
        /// Estimated condition number of the assembled system.
        condition: f64,
        /// Ceiling the estimate was compared against.
        limit: f64,
    },

    /// A configuration file could not be parsed or failed validation.
    #[error("config error: {0}")]
    Config(String),

    /// File-system failure while reading a config or writing results.
    #[error("io error on {path}: {source}")]
    Io {
        /// Path the operation was using.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: config errors 2, resonance 3,
    /// numerical failures 4.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::ModeMismatch(_) | Error::Io { .. } => 2,
            Error::Resonance { .. } => 3,
            Error::NearSingular { .. } => 4,
        }
    }
}
