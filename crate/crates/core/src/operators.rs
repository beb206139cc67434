//! Per-mode symbols of the equivalent-condition operators.
//!
//! On the sphere every equivalent condition acts on a spherical-harmonic mode
//! by scalar multiplication, so the two operator families reduce to symbol
//! tables. The elasto-acoustic symbols `beta_k` (orders 0..=3) enter the
//! solid-side impedance condition `T(u) = beta_k u_r e_r`; the acoustic
//! symbols `N_k` (orders 1..=3) model the layer as a Dirichlet-to-Neumann map
//! with `alpha = 1/(rho_f omega^2)`. Both families are Taylor models of the
//! same exact layer impedance, so `1/N_k` and `-beta_k` agree to order
//! `eps^{k+1}`; [`compare_operators`] measures that cancellation.
//!
//! The two derivations orient the interface normal oppositely, which flips
//! the sign of the mean-curvature term (and only that term: `H^2` is
//! orientation-free). [`SignFlag`] keeps the convention an explicit input so
//! the comparison fit can identify the consistent choice instead of baking
//! one in.

use std::fmt;

use crate::elastic::MaterialParams;
use crate::error::Error;
use crate::geometry::{SphereGeometry, Surface};
use crate::rates::{fit_rate, RateOutcome, MIN_FIT_SAMPLES};

/// Operator family a symbol value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolFamily {
    /// Impedance symbol `beta_k` acting on the solid displacement trace.
    ElastoAcoustic,
    /// Dirichlet-to-Neumann symbol `N_k` of the acoustic layer model.
    Acoustic,
}

/// One evaluated operator symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSymbol {
    family: SymbolFamily,
    order: u32,
    eps: f64,
    value: f64,
}

impl OperatorSymbol {
    /// Evaluates the elasto-acoustic symbol as a tagged record.
    pub fn elasto(
        k: u32,
        eps: f64,
        geom: &SphereGeometry,
        mat: &MaterialParams,
        l: u32,
    ) -> Result<Self, Error> {
        Ok(OperatorSymbol {
            family: SymbolFamily::ElastoAcoustic,
            order: k,
            eps,
            value: elasto_symbol(k, eps, geom, mat, l)?,
        })
    }

    /// Evaluates the acoustic symbol as a tagged record.
    pub fn acoustic(
        k: u32,
        eps: f64,
        geom: &SphereGeometry,
        mat: &MaterialParams,
        l: u32,
    ) -> Result<Self, Error> {
        Ok(OperatorSymbol {
            family: SymbolFamily::Acoustic,
            order: k,
            eps,
            value: acoustic_symbol(k, eps, geom, mat, l)?,
        })
    }

    /// Family tag.
    pub fn family(&self) -> SymbolFamily {
        self.family
    }

    /// Expansion order `k`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Layer thickness the symbol was evaluated at.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Symbol value.
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Sign convention for the mean-curvature term of the acoustic symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignFlag {
    /// `+H` in the acoustic expansion.
    Plus,
    /// `-H` in the acoustic expansion.
    Minus,
}

impl SignFlag {
    /// The multiplier applied to `H`.
    pub fn factor(self) -> f64 {
        match self {
            SignFlag::Plus => 1.0,
            SignFlag::Minus => -1.0,
        }
    }
}

impl fmt::Display for SignFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignFlag::Plus => write!(f, "+1"),
            SignFlag::Minus => write!(f, "-1"),
        }
    }
}

/// Elasto-acoustic impedance symbol `beta_k` for degree `l` at thickness `eps`.
///
/// With `W = rho_f omega^2`, `H = 1/R`, `K = 1/R^2` and `lb = -l(l+1)/R^2`:
///
/// ```text
/// beta_0 = 0
/// beta_1 = -eps W
/// beta_2 = -eps W (1 - eps H)
/// beta_3 = -eps W (1 - eps H + (eps^2/3)(lb + kappa^2 + 4H^2 - K))
/// ```
///
/// `eps = 0` is admitted (all symbols vanish there, recovering the
/// traction-free limit).
pub fn elasto_symbol(
    k: u32,
    eps: f64,
    geom: &SphereGeometry,
    mat: &MaterialParams,
    l: u32,
) -> Result<f64, Error> {
    if k > 3 {
        return Err(Error::Domain(format!(
            "impedance symbol order must be 0..=3, got {k}"
        )));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Domain(format!(
            "impedance symbol needs eps >= 0, got {eps}"
        )));
    }
    let w = mat.coupling();
    let h = geom.mean_curvature();
    let value = match k {
        0 => 0.0,
        1 => -eps * w,
        2 => -eps * w * (1.0 - eps * h),
        3 => {
            let kappa = mat.kappa();
            let bracket = geom.lb_symbol(l) + kappa * kappa + 4.0 * h * h
                - geom.gaussian_curvature();
            -eps * w * (1.0 - eps * h + eps * eps / 3.0 * bracket)
        }
        _ => unreachable!(),
    };
    Ok(value)
}

/// Acoustic layer symbol `N_k` in the `+H` convention.
pub fn acoustic_symbol(
    k: u32,
    eps: f64,
    geom: &SphereGeometry,
    mat: &MaterialParams,
    l: u32,
) -> Result<f64, Error> {
    acoustic_symbol_signed(k, eps, geom, mat, l, SignFlag::Plus)
}

/// Acoustic layer symbol `N_k` with an explicit curvature sign convention.
///
/// With `alpha = 1/(rho_f omega^2)` and `h = flag * H`:
///
/// ```text
/// N_1 = alpha/eps
/// N_2 = (alpha/eps)(1 + eps h)
/// N_3 = (alpha/eps)(1 + eps h + (eps^2/3)(-lb - kappa^2 + K - h^2))
/// ```
///
/// The symbol is a model of a layer of thickness `eps`, singular as
/// `eps -> 0`, so `eps = 0` is rejected rather than given a value.
pub fn acoustic_symbol_signed(
    k: u32,
    eps: f64,
    geom: &SphereGeometry,
    mat: &MaterialParams,
    l: u32,
    flag: SignFlag,
) -> Result<f64, Error> {
    if !(1..=3).contains(&k) {
        return Err(Error::Domain(format!(
            "acoustic symbol order must be 1..=3, got {k}"
        )));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::Domain(format!(
            "acoustic symbol is of order 1/eps and needs eps > 0, got {eps}"
        )));
    }
    let w = mat.coupling();
    if w <= 0.0 {
        return Err(Error::Domain(
            "acoustic symbol needs rho_f > 0 (alpha = 1/(rho_f omega^2))".into(),
        ));
    }
    let alpha = 1.0 / w;
    let h = flag.factor() * geom.mean_curvature();
    let value = match k {
        1 => alpha / eps,
        2 => alpha / eps * (1.0 + eps * h),
        3 => {
            let kappa = mat.kappa();
            let bracket =
                -geom.lb_symbol(l) - kappa * kappa + geom.gaussian_curvature() - h * h;
            alpha / eps * (1.0 + eps * h + eps * eps / 3.0 * bracket)
        }
        _ => unreachable!(),
    };
    Ok(value)
}

/// Fits the decay order of `|1/N_k + beta_k|` over a thickness grid.
///
/// The matched Taylor models predict a slope of at least `k + 1` for the
/// consistent curvature convention and a stall at 2 for the opposite one.
/// At `k = 1` the relation is exact and only rounding noise remains; that
/// (and any exact cancellation) is reported as [`RateOutcome::Exact`]
/// instead of a slope fitted to noise.
pub fn compare_operators(
    k: u32,
    geom: &SphereGeometry,
    mat: &MaterialParams,
    l: u32,
    eps_grid: &[f64],
    flag: SignFlag,
) -> Result<RateOutcome, Error> {
    if !(1..=3).contains(&k) {
        return Err(Error::Domain(format!(
            "operator comparison is defined for orders 1..=3, got {k}"
        )));
    }
    if eps_grid.len() < MIN_FIT_SAMPLES {
        return Err(Error::Domain(format!(
            "operator comparison needs at least {MIN_FIT_SAMPLES} thicknesses, got {}",
            eps_grid.len()
        )));
    }
    let mut residuals = Vec::with_capacity(eps_grid.len());
    let mut scale: f64 = 0.0;
    for &eps in eps_grid {
        let beta = elasto_symbol(k, eps, geom, mat, l)?;
        let n = acoustic_symbol_signed(k, eps, geom, mat, l, flag)?;
        residuals.push((1.0 / n + beta).abs());
        scale = scale.max(beta.abs());
    }
    // Residuals at rounding scale carry no order information.
    let noise = 8.0 * f64::EPSILON * scale;
    if residuals.iter().all(|&r| r <= noise) {
        return Ok(RateOutcome::Exact);
    }
    fit_rate(eps_grid, &residuals)
}
