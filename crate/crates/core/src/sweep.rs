//! Thickness sweeps: the experiment driver behind the CSV contract.
//!
//! For every `(eps, l, k)` cell the sweep solves the exact transmission
//! problem and the order-`k` impedance problem, measures their distance in
//! the solid norm, and measures the order-`k` fluid remainder against the
//! multiscale expansion. Cells are independent and run in parallel, but
//! rows are merged in the fixed order (eps descending, l ascending, k
//! ascending), so identical configs produce byte-identical CSV.

use std::fmt::Write as _;
use std::fs;

use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::elastic::manufactured_forcing;
use crate::error::Error;
use crate::geometry::SphereGeometry;
use crate::norms::{fluid_error_norm, solid_error_norm, NormRule};
use crate::solver::{
    multiscale_terms, resonance_margin, solve_ec, solve_transmission, ExpansionSet,
};
use crate::RESONANCE_MARGIN_TOL;

/// Exact CSV header line.
pub const CSV_HEADER: &str =
    "eps,l,k,err_solid,err_fluid_remainder,slope_hint,cond_transmission,cond_ec";

/// One sweep row.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    /// Layer thickness.
    pub eps: f64,
    /// Spherical-harmonic degree.
    pub l: u32,
    /// Impedance-condition order.
    pub k: u32,
    /// Solid-norm distance between the transmission and impedance solves.
    pub err_solid: f64,
    /// Weighted fluid remainder norm at expansion order `k`.
    pub err_fluid_remainder: f64,
    /// Two-point slope of `err_solid` against the previous thickness; NaN
    /// on the first thickness or when an error vanishes.
    pub slope_hint: f64,
    /// Condition estimate of the transmission system.
    pub cond_transmission: f64,
    /// Condition estimate of the impedance system.
    pub cond_ec: f64,
}

/// Everything a sweep produced: structured rows plus the emitted CSV text.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Rows in output order.
    pub records: Vec<SweepRecord>,
    /// The CSV text written to the output path.
    pub csv: String,
}

/// Runs a validated sweep and writes its CSV to the configured path.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome, Error> {
    config.validate()?;
    let mat = config.material()?;
    let radius = config.radius;
    let modes = config.modes();
    let orders = config.order_list();
    let eps_grid = config.eps_grid();

    // abort before any work if a mode violates the eigenfrequency assumption
    for &l in &modes {
        let margin = resonance_margin(&mat, radius, l)?;
        if margin < RESONANCE_MARGIN_TOL {
            return Err(Error::Resonance {
                omega: mat.omega,
                degree: l,
                margin,
                tolerance: RESONANCE_MARGIN_TOL,
            });
        }
    }

    // forcing and expansion terms are thickness-independent: one per mode
    let max_order = *orders.last().expect("validated nonempty");
    let base_geom = SphereGeometry::new(radius, 0.0)?;
    let mut shared: Vec<(u32, crate::elastic::ManufacturedForcing, ExpansionSet)> =
        Vec::with_capacity(modes.len());
    for &l in &modes {
        let forcing = manufactured_forcing(&mat, radius, l, config.amplitude)?;
        let expansion = multiscale_terms(&mat, &base_geom, l, &forcing, max_order)?;
        shared.push((l, forcing, expansion));
    }

    // cells listed in final row order so the parallel collect merges
    // deterministically
    let cells: Vec<(f64, usize)> = eps_grid
        .iter()
        .flat_map(|&eps| (0..shared.len()).map(move |li| (eps, li)))
        .collect();
    let cell_rows: Result<Vec<Vec<SweepRecord>>, Error> = cells
        .par_iter()
        .map(|&(eps, li)| {
            let (l, forcing, expansion) = &shared[li];
            let geom = SphereGeometry::new(radius, eps)?;
            let exact = solve_transmission(&mat, &geom, *l, forcing)?;
            let rule = NormRule::default();
            let mut rows = Vec::with_capacity(orders.len());
            for &k in &orders {
                let ec = solve_ec(k, &mat, radius, eps, *l, forcing)?;
                let err_solid =
                    solid_error_norm(exact.solid(), ec.field(), radius, &rule)?.value();
                let err_fluid =
                    fluid_error_norm(exact.fluid(), expansion, eps, k as usize, &rule)?
                        .value();
                rows.push(SweepRecord {
                    eps,
                    l: *l,
                    k,
                    err_solid,
                    err_fluid_remainder: err_fluid,
                    slope_hint: f64::NAN,
                    cond_transmission: exact.conditioning(),
                    cond_ec: ec.conditioning(),
                });
            }
            Ok(rows)
        })
        .collect();
    let mut records: Vec<SweepRecord> = cell_rows?.into_iter().flatten().collect();

    // local order estimate between consecutive thicknesses of one (l, k)
    let stride = shared.len() * orders.len();
    for i in stride..records.len() {
        let prev = &records[i - stride];
        let cur = &records[i];
        debug_assert!((prev.l, prev.k) == (cur.l, cur.k));
        let hint = if prev.err_solid > 0.0 && cur.err_solid > 0.0 {
            (prev.err_solid / cur.err_solid).ln() / (prev.eps / cur.eps).ln()
        } else {
            f64::NAN
        };
        records[i].slope_hint = hint;
    }

    let mut csv = String::with_capacity(64 * (records.len() + 1));
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in &records {
        // f64 Display prints the shortest round-trip decimal
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            r.eps,
            r.l,
            r.k,
            r.err_solid,
            r.err_fluid_remainder,
            r.slope_hint,
            r.cond_transmission,
            r.cond_ec
        )
        .expect("writes to a String cannot fail");
    }
    fs::write(&config.output, &csv).map_err(|source| Error::Io {
        path: config.output.clone(),
        source,
    })?;
    Ok(SweepOutcome { records, csv })
}
