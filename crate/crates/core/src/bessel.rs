//! Spherical Bessel functions of the first and second kind.
//!
//! Everything downstream (elastic modes, fluid modes, impedance symbols)
//! reduces to `j_l`, `y_l` and their first derivatives at real positive
//! arguments. Degrees are capped at [`L_MAX`]; the solvers only sweep low
//! modes but the cap leaves generous headroom.
//!
//! `y_l` is always generated by upward recurrence, which is stable for the
//! second kind. `j_l` is generated upward only in the oscillatory regime
//! `x >= l`; below that the upward recurrence loses all accuracy and a
//! Miller-type downward recurrence is used instead, started above the
//! requested degree and normalized against the closed forms of `j_0` and
//! `j_1` (whichever is larger in magnitude, so normalization never lands on
//! a zero of `sin`).

use crate::error::Error;

/// Largest supported spherical-harmonic degree.
pub const L_MAX: u32 = 64;

/// Values of `j_l`, `y_l` and their derivatives at a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    /// Degree `l`.
    pub degree: u32,
    /// Evaluation point `x > 0`.
    pub argument: f64,
    /// First kind `j_l(x)`.
    pub j: f64,
    /// Second kind `y_l(x)`.
    pub y: f64,
    /// Derivative `j_l'(x)`.
    pub j_prime: f64,
    /// Derivative `y_l'(x)`.
    pub y_prime: f64,
}

/// Evaluates `j_l`, `y_l`, `j_l'`, `y_l'` at `x`.
///
/// Fails for non-finite or non-positive `x` and for `l > L_MAX`. Very small
/// `x` combined with large `l` drives `y_l` toward overflow; the IEEE
/// infinity is returned as-is in that regime rather than masked.
pub fn bessel_eval(l: u32, x: f64) -> Result<BesselEval, Error> {
    if l > L_MAX {
        return Err(Error::Domain(format!(
            "bessel degree l = {l} exceeds the supported maximum {L_MAX}"
        )));
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "bessel argument must be finite and positive, got {x}"
        )));
    }
    let top = l.max(1);
    let j_all = sph_j_all(top, x);
    let y_all = sph_y_all(top, x);
    let (j, y) = (j_all[l as usize], y_all[l as usize]);
    // f_l' = f_{l-1} - (l+1)/x f_l; at l = 0 the same identity reads f_0' = -f_1.
    let (j_prime, y_prime) = if l == 0 {
        (-j_all[1], -y_all[1])
    } else {
        let c = (l + 1) as f64 / x;
        (j_all[l as usize - 1] - c * j, y_all[l as usize - 1] - c * y)
    };
    Ok(BesselEval {
        degree: l,
        argument: x,
        j,
        y,
        j_prime,
        y_prime,
    })
}

fn j0(x: f64) -> f64 {
    x.sin() / x
}

fn j1(x: f64) -> f64 {
    x.sin() / (x * x) - x.cos() / x
}

/// `j_0 .. j_lmax` by whichever recurrence direction is stable at `x`.
fn sph_j_all(lmax: u32, x: f64) -> Vec<f64> {
    debug_assert!(lmax >= 1);
    if x >= lmax as f64 {
        sph_j_upward(lmax, x)
    } else {
        sph_j_downward(lmax, x)
    }
}

fn sph_j_upward(lmax: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(lmax as usize + 1);
    out.push(j0(x));
    out.push(j1(x));
    for n in 1..lmax {
        let next = (2 * n + 1) as f64 / x * out[n as usize] - out[n as usize - 1];
        out.push(next);
    }
    out
}

/// Miller downward recurrence, normalized against `j_0` or `j_1`.
///
/// Raw iterates grow by roughly `(2n+1)/x` per step, so they are rescaled
/// whenever they threaten the representable range; true values whose ratio
/// to `j_0` falls below the rescale window flush to zero, which only happens
/// far outside the tested argument range.
fn sph_j_downward(lmax: u32, x: f64) -> Vec<f64> {
    const RESCALE: f64 = 1e250;
    let start = miller_start(lmax, x);
    let mut out = vec![0.0_f64; lmax as usize + 1];
    let mut upper = 0.0_f64; // f_{k+1}
    let mut cur = 1e-250_f64; // f_k
    let mut k = start;
    loop {
        if k <= lmax {
            out[k as usize] = cur;
        }
        if k == 0 {
            break;
        }
        let lower = (2 * k + 1) as f64 / x * cur - upper;
        upper = cur;
        cur = lower;
        k -= 1;
        if cur.abs() > RESCALE {
            upper /= RESCALE;
            cur /= RESCALE;
            for v in &mut out {
                *v /= RESCALE;
            }
        }
    }
    let (a, b) = (j0(x), j1(x));
    let scale = if a.abs() >= b.abs() {
        a / out[0]
    } else {
        b / out[1]
    };
    for v in &mut out {
        *v *= scale;
    }
    out
}

/// Start order for the downward recurrence giving ~15 significant digits.
fn miller_start(lmax: u32, x: f64) -> u32 {
    let m1 = msta1(x, 200);
    let m = if m1 < lmax {
        msta2(x, lmax, 15)
    } else {
        m1
    };
    m.max(lmax + 10)
}

/// Magnitude estimate `log10 |j_n(x)|`-ish used by the start-order search.
fn envj(n: f64, x: f64) -> f64 {
    0.5 * (6.28 * n).log10() - n * (1.36 * x / n).log10()
}

/// Order at which `j_n(x)` has dropped `mp` decades below its peak.
fn msta1(x: f64, mp: u32) -> u32 {
    let a0 = x.abs();
    let mp = mp as f64;
    let mut n0 = (1.1 * a0) as i64 + 1;
    let mut f0 = envj(n0 as f64, a0) - mp;
    let mut n1 = n0 + 5;
    let mut f1 = envj(n1 as f64, a0) - mp;
    let mut nn = n1;
    for _ in 0..20 {
        nn = n1 - ((n1 - n0) as f64 / (1.0 - f0 / f1)) as i64;
        let f = envj(nn as f64, a0) - mp;
        if (nn - n1).abs() < 1 {
            break;
        }
        n0 = n1;
        f0 = f1;
        n1 = nn;
        f1 = f;
    }
    nn.max(0) as u32
}

/// Start order so that downward recurrence reaches order `n` with `mp`
/// significant digits.
fn msta2(x: f64, n: u32, mp: u32) -> u32 {
    let a0 = x.abs();
    let hmp = 0.5 * mp as f64;
    let ejn = envj(n as f64, a0);
    let (obj, mut n0) = if ejn <= hmp {
        (mp as f64, (1.1 * a0) as i64 + 1)
    } else {
        (hmp + ejn, n as i64)
    };
    let mut f0 = envj(n0 as f64, a0) - obj;
    let mut n1 = n0 + 5;
    let mut f1 = envj(n1 as f64, a0) - obj;
    let mut nn = n1;
    for _ in 0..20 {
        nn = n1 - ((n1 - n0) as f64 / (1.0 - f0 / f1)) as i64;
        let f = envj(nn as f64, a0) - obj;
        if (nn - n1).abs() < 1 {
            break;
        }
        n0 = n1;
        f0 = f1;
        n1 = nn;
        f1 = f;
    }
    (nn.max(0) as u32).saturating_add(10)
}

/// `y_0 .. y_lmax`; upward recurrence is stable for the second kind.
fn sph_y_all(lmax: u32, x: f64) -> Vec<f64> {
    debug_assert!(lmax >= 1);
    let mut out = Vec::with_capacity(lmax as usize + 1);
    out.push(-x.cos() / x);
    out.push(-x.cos() / (x * x) - x.sin() / x);
    for n in 1..lmax {
        let next = (2 * n + 1) as f64 / x * out[n as usize] - out[n as usize - 1];
        out.push(next);
    }
    out
}
