//! Log-log convergence-rate fitting.
//!
//! Thin-layer accuracy claims are all of the form `error = C * eps^p`; the
//! sweeps verify them by least-squares fitting `ln error` against `ln eps`.
//! An error series that cancels exactly carries no slope information and is
//! reported as [`RateOutcome::Exact`] instead of being forced through the
//! logarithm.

use crate::error::Error;

/// Least-squares fit of `ln error = slope * ln eps + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    /// Fitted convergence order.
    pub slope: f64,
    /// Fitted `ln C`.
    pub intercept: f64,
    /// Coefficient of determination of the log-log fit.
    pub r_squared: f64,
}

/// Result of a rate fit: either a genuine fit or exact cancellation.
#[derive(Debug, Clone, PartialEq)]
pub enum RateOutcome {
    /// Some error vanished (or went negative): the compared quantities agree
    /// exactly and no order can be fitted.
    Exact,
    /// A proper log-log fit.
    Fitted(RateFit),
}

impl RateOutcome {
    /// The fitted slope, or `None` for exact agreement.
    pub fn slope(&self) -> Option<f64> {
        match self {
            RateOutcome::Exact => None,
            RateOutcome::Fitted(fit) => Some(fit.slope),
        }
    }
}

/// Minimum number of samples accepted by [`fit_rate`].
pub const MIN_FIT_SAMPLES: usize = 5;

/// Fits a convergence order to `(eps, error)` samples.
///
/// Requires at least [`MIN_FIT_SAMPLES`] pairs with positive, finite,
/// pairwise-distinct `eps`. Nonpositive error values signal exact
/// cancellation and short-circuit to [`RateOutcome::Exact`].
pub fn fit_rate(eps: &[f64], errors: &[f64]) -> Result<RateOutcome, Error> {
    if eps.len() != errors.len() {
        return Err(Error::Domain(format!(
            "rate fit needs matching sample lengths, got {} eps and {} errors",
            eps.len(),
            errors.len()
        )));
    }
    if eps.len() < MIN_FIT_SAMPLES {
        return Err(Error::Domain(format!(
            "rate fit needs at least {MIN_FIT_SAMPLES} samples, got {}",
            eps.len()
        )));
    }
    for &e in eps {
        if !e.is_finite() || e <= 0.0 {
            return Err(Error::Domain(format!("eps samples must be positive, got {e}")));
        }
    }
    for i in 0..eps.len() {
        for j in i + 1..eps.len() {
            if eps[i] == eps[j] {
                return Err(Error::Domain(format!("duplicate eps sample {}", eps[i])));
            }
        }
    }
    for &e in errors {
        if e.is_nan() {
            return Err(Error::Domain("error samples must not be NaN".into()));
        }
    }
    if errors.iter().any(|&e| e <= 0.0) {
        return Ok(RateOutcome::Exact);
    }

    let n = eps.len() as f64;
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot <= 1e-28 {
        // constant data: the constant line is a perfect fit
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(RateOutcome::Fitted(RateFit {
        slope,
        intercept,
        r_squared,
    }))
}
