//! Sweep configuration: JSON schema, validation, normalized accessors.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::elastic::MaterialParams;
use crate::error::Error;
use crate::rates::MIN_FIT_SAMPLES;

/// Largest spherical-harmonic degree a sweep may request. Modal solves work
/// beyond this, but sweep output is meant for rate experiments, which are
/// already conclusive well below it.
pub const MAX_SWEEP_DEGREE: u32 = 16;

/// A full sweep description as read from a JSON config file.
///
/// The schema is closed: unknown keys are rejected so that a typo cannot
/// silently fall back to a default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Solid density.
    pub rho_s: f64,
    /// First Lame parameter.
    pub lambda: f64,
    /// Shear modulus.
    pub mu: f64,
    /// Fluid density.
    pub rho_f: f64,
    /// Fluid sound speed.
    pub c: f64,
    /// Angular frequency.
    pub omega: f64,
    /// Interface radius.
    #[serde(rename = "R")]
    pub radius: f64,
    /// Forcing amplitude.
    pub amplitude: f64,
    /// Spherical-harmonic degrees to sweep.
    pub l_list: Vec<u32>,
    /// Largest layer thickness.
    pub eps_start: f64,
    /// Geometric ratio between consecutive thicknesses.
    pub eps_ratio: f64,
    /// Number of thicknesses.
    pub eps_count: usize,
    /// Impedance-condition orders to solve.
    pub orders: Vec<u32>,
    /// CSV output path.
    pub output: String,
}

impl SweepConfig {
    /// Parses and validates a config from a JSON string.
    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let config: SweepConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads, parses, and validates a config file.
    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    /// Checks every field constraint; called by the parsers and again by
    /// [`crate::sweep::run_sweep`] so hand-built configs get the same
    /// scrutiny.
    pub fn validate(&self) -> Result<(), Error> {
        self.material().map_err(|e| Error::Config(e.to_string()))?;
        if !self.radius.is_finite() || self.radius <= 0.0 {
            return Err(Error::Config(format!(
                "R must be positive, got {}",
                self.radius
            )));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::Config(format!(
                "amplitude must be finite, got {}",
                self.amplitude
            )));
        }
        if !self.eps_start.is_finite()
            || self.eps_start <= 0.0
            || self.eps_start >= self.radius / 2.0
        {
            return Err(Error::Config(format!(
                "eps_start must lie in (0, R/2) = (0, {}), got {}",
                self.radius / 2.0,
                self.eps_start
            )));
        }
        if !self.eps_ratio.is_finite() || self.eps_ratio <= 0.0 || self.eps_ratio >= 1.0 {
            return Err(Error::Config(format!(
                "eps_ratio must lie in (0, 1), got {}",
                self.eps_ratio
            )));
        }
        if self.eps_count < MIN_FIT_SAMPLES {
            return Err(Error::Config(format!(
                "eps_count must be at least {MIN_FIT_SAMPLES} for rate fits, got {}",
                self.eps_count
            )));
        }
        if self.l_list.is_empty() {
            return Err(Error::Config("l_list must not be empty".into()));
        }
        if let Some(&l) = self.l_list.iter().find(|&&l| l > MAX_SWEEP_DEGREE) {
            return Err(Error::Config(format!(
                "l_list entries must be at most {MAX_SWEEP_DEGREE}, got {l}"
            )));
        }
        if self.orders.is_empty() {
            return Err(Error::Config("orders must not be empty".into()));
        }
        if let Some(&k) = self.orders.iter().find(|&&k| k > 3) {
            return Err(Error::Config(format!(
                "orders entries must be at most 3, got {k}"
            )));
        }
        if self.output.is_empty() {
            return Err(Error::Config("output path must not be empty".into()));
        }
        Ok(())
    }

    /// Material parameters of the config.
    pub fn material(&self) -> Result<MaterialParams, Error> {
        MaterialParams::new(
            self.rho_s,
            self.lambda,
            self.mu,
            self.rho_f,
            self.c,
            self.omega,
        )
    }

    /// Degrees to sweep, ascending and deduplicated.
    pub fn modes(&self) -> Vec<u32> {
        let mut modes = self.l_list.clone();
        modes.sort_unstable();
        modes.dedup();
        modes
    }

    /// Orders to solve, ascending and deduplicated.
    pub fn order_list(&self) -> Vec<u32> {
        let mut orders = self.orders.clone();
        orders.sort_unstable();
        orders.dedup();
        orders
    }

    /// Geometric thickness grid, largest first.
    pub fn eps_grid(&self) -> Vec<f64> {
        let mut grid = Vec::with_capacity(self.eps_count);
        let mut eps = self.eps_start;
        for _ in 0..self.eps_count {
            grid.push(eps);
            eps *= self.eps_ratio;
        }
        grid
    }
}
