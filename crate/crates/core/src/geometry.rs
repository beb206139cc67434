//! Interface geometry and the scaled thin-layer expansion of the Helmholtz
//! operator.
//!
//! The wet interface is the sphere `r = R` with the outward normal pointing
//! into the fluid layer, so both principal curvatures equal `1/R`: the mean
//! curvature is `H = 1/R` and the Gaussian curvature `K = 1/R^2`. On the
//! degree-`l` spherical harmonic the Laplace-Beltrami operator acts as the
//! scalar `-l(l+1)/R^2`.
//!
//! Inside the layer the radius is written `r = R + eps*Y` with a stretched
//! normal coordinate `Y in [0, 1]`. After scaling by `eps^2` the Helmholtz
//! operator expands in powers of `eps`,
//!
//! ```text
//! eps^2 (Lap + kappa^2) = L0 + eps L1 + eps^2 L2 + O(eps^3),
//! L0 q = q'',    L1 q = 2 H q',
//! L2 q = (lb(l) + kappa^2) q - 2 (2 H^2 - K) Y q',
//! ```
//!
//! with `'` the derivative in `Y`. [`LayerOperators`] packages these three
//! actions; the layer profile recurrence and its tests both consume them.

use crate::error::Error;
use crate::poly::Polynomial;

/// Curvature data of a constant-curvature interface.
///
/// Only the sphere is implemented, but everything downstream touches the
/// interface through this trait, so another constant-curvature surface would
/// slot in without changes elsewhere.
pub trait Surface {
    /// Mean curvature `H` with respect to the normal pointing into the layer.
    fn mean_curvature(&self) -> f64;
    /// Gaussian curvature `K`.
    fn gaussian_curvature(&self) -> f64;
    /// Scalar symbol of the Laplace-Beltrami operator on degree `l`.
    fn lb_symbol(&self, l: u32) -> f64;
}

/// Sphere of radius `R` carrying a fluid layer of thickness `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereGeometry {
    radius: f64,
    thickness: f64,
}

impl SphereGeometry {
    /// Builds the geometry; requires `R > 0` and `0 <= eps < R/2`.
    ///
    /// Zero thickness is admitted so that the vanishing-layer limit of the
    /// impedance solves is expressible; the transmission solver itself
    /// insists on a genuine layer.
    pub fn new(radius: f64, thickness: f64) -> Result<Self, Error> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::Domain(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        if !thickness.is_finite() || thickness < 0.0 || thickness >= 0.5 * radius {
            return Err(Error::Domain(format!(
                "layer thickness must satisfy 0 <= eps < R/2 = {}, got {thickness}",
                0.5 * radius
            )));
        }
        Ok(SphereGeometry { radius, thickness })
    }

    /// Interface radius `R`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Layer thickness `eps`.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Outer boundary radius `R + eps`.
    pub fn outer_radius(&self) -> f64 {
        self.radius + self.thickness
    }

    /// Same interface with a different layer thickness.
    pub fn with_thickness(&self, thickness: f64) -> Result<Self, Error> {
        SphereGeometry::new(self.radius, thickness)
    }
}

impl Surface for SphereGeometry {
    fn mean_curvature(&self) -> f64 {
        1.0 / self.radius
    }

    fn gaussian_curvature(&self) -> f64 {
        1.0 / (self.radius * self.radius)
    }

    fn lb_symbol(&self, l: u32) -> f64 {
        -((l * (l + 1)) as f64) / (self.radius * self.radius)
    }
}

/// The first three terms of the scaled layer expansion on one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerOperators {
    mean: f64,
    lb: f64,
    kappa_sq: f64,
    /// Coefficient `2 (2 H^2 - K)` of the `Y q'` drift term.
    drift: f64,
}

/// Builds the layer operator symbols for degree `l` at wavenumber `kappa`.
pub fn scaled_laplacian_symbols(
    surface: &impl Surface,
    l: u32,
    kappa: f64,
) -> Result<LayerOperators, Error> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::Domain(format!(
            "layer expansion needs a positive wavenumber, got {kappa}"
        )));
    }
    let h = surface.mean_curvature();
    let k = surface.gaussian_curvature();
    Ok(LayerOperators {
        mean: h,
        lb: surface.lb_symbol(l),
        kappa_sq: kappa * kappa,
        drift: 2.0 * (2.0 * h * h - k),
    })
}

impl LayerOperators {
    /// `L0 q = q''`.
    pub fn l0(&self, q_dd: f64) -> f64 {
        q_dd
    }

    /// `L1 q = 2 H q'`.
    pub fn l1(&self, q_d: f64) -> f64 {
        2.0 * self.mean * q_d
    }

    /// `L2 q = (lb + kappa^2) q - 2 (2H^2 - K) Y q'`.
    pub fn l2(&self, y: f64, q: f64, q_d: f64) -> f64 {
        (self.lb + self.kappa_sq) * q - self.drift * y * q_d
    }

    /// `(L0 + eps L1 + eps^2 L2) q` at stretched coordinate `y`.
    pub fn truncated(&self, eps: f64, y: f64, q: f64, q_d: f64, q_dd: f64) -> f64 {
        self.l0(q_dd) + eps * self.l1(q_d) + eps * eps * self.l2(y, q, q_d)
    }

    /// `L1` acting on a polynomial in `Y`.
    pub fn l1_poly(&self, q: &Polynomial) -> Polynomial {
        q.derivative().scale(2.0 * self.mean)
    }

    /// `L2` acting on a polynomial in `Y`.
    pub fn l2_poly(&self, q: &Polynomial) -> Polynomial {
        let react = q.scale(self.lb + self.kappa_sq);
        let drift = q.derivative().mul_x().scale(self.drift);
        react.sub(&drift)
    }

    /// Mean curvature used by the symbols.
    pub fn mean_curvature(&self) -> f64 {
        self.mean
    }

    /// `lb(l) + kappa^2`, the zeroth-order tangential symbol.
    pub fn tangential_symbol(&self) -> f64 {
        self.lb + self.kappa_sq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{fit_rate, RateOutcome};
    use approx::assert_relative_eq;

    #[test]
    fn sphere_curvatures() {
        let geom = SphereGeometry::new(2.0, 0.1).unwrap();
        assert_relative_eq!(geom.mean_curvature(), 0.5);
        assert_relative_eq!(geom.gaussian_curvature(), 0.25);
        // umbilic surface: H^2 = K exactly
        assert_eq!(
            geom.mean_curvature() * geom.mean_curvature(),
            geom.gaussian_curvature()
        );
        assert_relative_eq!(geom.outer_radius(), 2.1);
    }

    #[test]
    fn lb_symbol_values() {
        let unit = SphereGeometry::new(1.0, 0.1).unwrap();
        assert_relative_eq!(unit.lb_symbol(0), 0.0);
        assert_relative_eq!(unit.lb_symbol(2), -6.0);
        let two = SphereGeometry::new(2.0, 0.1).unwrap();
        assert_relative_eq!(two.lb_symbol(1), -0.5);
    }

    #[test]
    fn geometry_validation() {
        assert!(SphereGeometry::new(0.0, 0.1).is_err());
        assert!(SphereGeometry::new(-1.0, 0.1).is_err());
        assert!(SphereGeometry::new(1.0, -0.1).is_err());
        assert!(SphereGeometry::new(1.0, 0.5).is_err());
        assert!(SphereGeometry::new(1.0, 0.0).is_ok(), "vanishing layer is a valid limit");
        assert!(SphereGeometry::new(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn layer_operator_values() {
        let unit = SphereGeometry::new(1.0, 0.1).unwrap();
        let ops = scaled_laplacian_symbols(&unit, 0, 1.0).unwrap();
        // L1 on q = Y: 2 H q' = 2 everywhere
        assert_relative_eq!(ops.l1(1.0), 2.0);
        // L2 on q = 1 at l = 0, kappa = 1: kappa^2 * q = 1
        assert_relative_eq!(ops.l2(0.7, 1.0, 0.0), 1.0);
        assert!(scaled_laplacian_symbols(&unit, 0, 0.0).is_err());
    }

    #[test]
    fn polynomial_actions_match_pointwise_actions() {
        let geom = SphereGeometry::new(1.3, 0.1).unwrap();
        let ops = scaled_laplacian_symbols(&geom, 3, 0.8).unwrap();
        let q = Polynomial::new(vec![0.5, -1.0, 2.0, 0.25]);
        let qd = q.derivative();
        for &y in &[0.0, 0.31, 0.77, 1.0] {
            assert_relative_eq!(
                ops.l1_poly(&q).eval(y),
                ops.l1(qd.eval(y)),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                ops.l2_poly(&q).eval(y),
                ops.l2(y, q.eval(y), qd.eval(y)),
                max_relative = 1e-14
            );
        }
    }

    /// Smooth radial test functions with closed-form derivatives.
    struct TestFn {
        f: fn(f64) -> f64,
        d1: fn(f64) -> f64,
        d2: fn(f64) -> f64,
    }

    fn test_functions() -> Vec<TestFn> {
        vec![
            TestFn {
                f: |r| (1.9 * r).sin(),
                d1: |r| 1.9 * (1.9 * r).cos(),
                d2: |r| -1.9 * 1.9 * (1.9 * r).sin(),
            },
            TestFn {
                f: |r| r * r * r - 2.0 * r,
                d1: |r| 3.0 * r * r - 2.0,
                d2: |r| 6.0 * r,
            },
            TestFn {
                f: |r| (-0.7 * r).exp(),
                d1: |r| -0.7 * (-0.7 * r).exp(),
                d2: |r| 0.49 * (-0.7 * r).exp(),
            },
            TestFn {
                f: |r| (1.3 * r + 0.4).cos() + 0.5 * r,
                d1: |r| -1.3 * (1.3 * r + 0.4).sin() + 0.5,
                d2: |r| -1.69 * (1.3 * r + 0.4).cos(),
            },
        ]
    }

    /// The truncated layer expansion must approximate the exact scaled
    /// Helmholtz operator to third order in the thickness. The oracle is the
    /// exact spherical Laplacian of the same radial function.
    #[test]
    fn truncation_residual_is_third_order() {
        let radius = 1.0;
        let kappa = 1.3;
        let eps_grid: Vec<f64> = (0..6).map(|j| 0.1 * 0.5f64.powi(j)).collect();
        for tf in test_functions() {
            for &l in &[0u32, 2, 5, 8] {
                let geom = SphereGeometry::new(radius, 0.0).unwrap();
                let ops = scaled_laplacian_symbols(&geom, l, kappa).unwrap();
                let ll = (l * (l + 1)) as f64;
                let residuals: Vec<f64> = eps_grid
                    .iter()
                    .map(|&eps| {
                        let mut worst = 0.0_f64;
                        for i in 0..=32 {
                            let y = i as f64 / 32.0;
                            let r = radius + eps * y;
                            // exact per-mode Helmholtz image, scaled by eps^2
                            let exact = eps
                                * eps
                                * ((tf.d2)(r) + 2.0 / r * (tf.d1)(r)
                                    + (kappa * kappa - ll / (r * r)) * (tf.f)(r));
                            // chain rule: d/dY = eps d/dr
                            let truncated = ops.truncated(
                                eps,
                                y,
                                (tf.f)(r),
                                eps * (tf.d1)(r),
                                eps * eps * (tf.d2)(r),
                            );
                            worst = worst.max((exact - truncated).abs());
                        }
                        worst
                    })
                    .collect();
                let RateOutcome::Fitted(fit) = fit_rate(&eps_grid, &residuals).unwrap() else {
                    panic!("residual should not vanish identically");
                };
                assert!(
                    fit.slope >= 2.8,
                    "layer truncation slope {} at l = {l}",
                    fit.slope
                );
            }
        }
    }
}
