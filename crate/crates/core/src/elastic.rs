//! Per-mode elastic fields in the solid ball.
//!
//! On the degree-`l` spherical harmonic a time-harmonic displacement that is
//! regular at the origin splits into a compressional part generated by
//! `j_l(k_p r)` and a shear (SV) part generated by `j_l(k_s r)`:
//!
//! ```text
//! u = f(r) Y_l e_r + g(r) grad_S Y_l,
//! f = A k_p j_l'(k_p r)        + B l(l+1) j_l(k_s r) / r,
//! g = A j_l(k_p r) / r         + B (k_s j_l'(k_s r) + j_l(k_s r) / r),
//! ```
//!
//! where `grad_S` is the surface gradient on the unit sphere. Both parts
//! solve the homogeneous Navier system exactly, which the tests verify
//! against a finite-difference discretization of the per-mode operator. The
//! surface traction on a sphere of radius `r` is
//!
//! ```text
//! tau_rr = lambda div(u) + 2 mu f',      tau_rt = mu (g' + (f - g)/r),
//! ```
//!
//! the coefficients of `Y_l e_r` and `grad_S Y_l` in `sigma(u) e_r`.
//!
//! The manufactured forcing used by the solvers is a smooth radial bump
//! `u_p = amplitude * chi(r) Y_l e_r` supported in `[R/2, R]`; pushing it
//! through the Navier operator yields a body force that is independent of
//! the layer thickness, so convergence studies in `eps` see fixed data.

use crate::bessel::{bessel_eval, L_MAX};
use crate::error::Error;

/// Material constants of the coupled solid/fluid pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Solid density.
    pub rho_s: f64,
    /// First Lame parameter.
    pub lambda: f64,
    /// Shear modulus.
    pub mu: f64,
    /// Fluid density (zero decouples the fluid).
    pub rho_f: f64,
    /// Sound speed in the fluid.
    pub c: f64,
    /// Angular frequency.
    pub omega: f64,
}

impl MaterialParams {
    /// Validates the constants; `rho_f = 0` is allowed as the decoupled limit.
    pub fn new(
        rho_s: f64,
        lambda: f64,
        mu: f64,
        rho_f: f64,
        c: f64,
        omega: f64,
    ) -> Result<Self, Error> {
        let all = [rho_s, lambda, mu, rho_f, c, omega];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("material constants must be finite".into()));
        }
        if rho_s <= 0.0 || mu <= 0.0 || c <= 0.0 || omega <= 0.0 {
            return Err(Error::Domain(
                "rho_s, mu, c, omega must be positive".into(),
            ));
        }
        if lambda + 2.0 * mu <= 0.0 {
            return Err(Error::Domain(
                "lambda + 2 mu must be positive for a well-posed solid".into(),
            ));
        }
        if rho_f < 0.0 {
            return Err(Error::Domain("rho_f must be nonnegative".into()));
        }
        Ok(MaterialParams {
            rho_s,
            lambda,
            mu,
            rho_f,
            c,
            omega,
        })
    }

    /// Acoustic wavenumber `kappa = omega / c`.
    pub fn kappa(&self) -> f64 {
        self.omega / self.c
    }

    /// Compressional wavenumber `k_p = omega sqrt(rho_s / (lambda + 2 mu))`.
    pub fn k_p(&self) -> f64 {
        self.omega * (self.rho_s / (self.lambda + 2.0 * self.mu)).sqrt()
    }

    /// Shear wavenumber `k_s = omega sqrt(rho_s / mu)`.
    pub fn k_s(&self) -> f64 {
        self.omega * (self.rho_s / self.mu).sqrt()
    }

    /// Coupling coefficient `rho_f omega^2` of the normal-velocity condition.
    pub fn coupling(&self) -> f64 {
        self.rho_f * self.omega * self.omega
    }
}

/// Radial data of a modal field at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidSample {
    /// Radial component coefficient `f(r)`.
    pub f: f64,
    /// Tangential component coefficient `g(r)`.
    pub g: f64,
    /// `f'(r)`.
    pub f_d: f64,
    /// `g'(r)`.
    pub g_d: f64,
    /// Divergence coefficient of the field.
    pub div: f64,
}

/// Homogeneous Navier solution on one mode, a combination of the
/// compressional and shear radial generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalSolidField {
    degree: u32,
    coeff_p: f64,
    coeff_sv: f64,
    material: MaterialParams,
}

impl ModalSolidField {
    /// Builds the field; the shear coefficient must vanish at `l = 0`, where
    /// no tangential direction exists.
    pub fn new(
        material: MaterialParams,
        degree: u32,
        coeff_p: f64,
        coeff_sv: f64,
    ) -> Result<Self, Error> {
        if degree > L_MAX {
            return Err(Error::Domain(format!(
                "degree {degree} exceeds the supported maximum {L_MAX}"
            )));
        }
        if degree == 0 && coeff_sv != 0.0 {
            return Err(Error::Domain(
                "the shear generator does not exist at l = 0".into(),
            ));
        }
        if !coeff_p.is_finite() || !coeff_sv.is_finite() {
            return Err(Error::Domain("field coefficients must be finite".into()));
        }
        Ok(ModalSolidField {
            degree,
            coeff_p,
            coeff_sv,
            material,
        })
    }

    /// Spherical-harmonic degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Compressional coefficient `A`.
    pub fn coeff_p(&self) -> f64 {
        self.coeff_p
    }

    /// Shear coefficient `B` (zero at `l = 0`).
    pub fn coeff_sv(&self) -> f64 {
        self.coeff_sv
    }

    /// Material the field lives in.
    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    /// Evaluates `f, g, f', g'` and the divergence coefficient at `0 < r`.
    ///
    /// Panics on a non-positive radius; solvers only sample the open ball.
    pub fn sample(&self, r: f64) -> SolidSample {
        assert!(r > 0.0 && r.is_finite(), "radius must be positive, got {r}");
        let l = self.degree;
        let ll = (l * (l + 1)) as f64;
        let mut out = SolidSample {
            f: 0.0,
            g: 0.0,
            f_d: 0.0,
            g_d: 0.0,
            div: 0.0,
        };
        let a = self.coeff_p;
        if a != 0.0 {
            let kp = self.material.k_p();
            let x = kp * r;
            let e = bessel_eval(l, x).expect("construction validated the degree");
            let jdd = second_derivative(l, x, e.j, e.j_prime);
            out.f += a * kp * e.j_prime;
            out.f_d += a * kp * kp * jdd;
            out.g += a * e.j / r;
            out.g_d += a * (kp * e.j_prime / r - e.j / (r * r));
            out.div += -a * kp * kp * e.j;
        }
        let b = self.coeff_sv;
        if b != 0.0 {
            let ks = self.material.k_s();
            let x = ks * r;
            let e = bessel_eval(l, x).expect("construction validated the degree");
            let jdd = second_derivative(l, x, e.j, e.j_prime);
            out.f += b * ll * e.j / r;
            out.f_d += b * ll * (ks * e.j_prime / r - e.j / (r * r));
            out.g += b * (ks * e.j_prime + e.j / r);
            out.g_d += b * (ks * ks * jdd + ks * e.j_prime / r - e.j / (r * r));
            // the shear generator is divergence-free
        }
        if l == 0 {
            // no tangential direction at degree zero
            out.g = 0.0;
            out.g_d = 0.0;
        }
        out
    }

    /// Traction coefficients `(tau_rr, tau_rt)` of `sigma(u) e_r` at radius `r`.
    pub fn traction(&self, r: f64) -> (f64, f64) {
        let s = self.sample(r);
        traction_from_sample(&self.material, self.degree, r, &s)
    }

    /// Linear combination of same-mode fields.
    pub fn superpose(terms: &[(f64, &ModalSolidField)]) -> Result<ModalSolidField, Error> {
        let Some(&(_, first)) = terms.first() else {
            return Err(Error::Domain("superposition needs at least one term".into()));
        };
        let mut a = 0.0;
        let mut b = 0.0;
        for &(w, field) in terms {
            if field.degree != first.degree || field.material != first.material {
                return Err(Error::ModeMismatch(
                    "superposed fields must share degree and material".into(),
                ));
            }
            a += w * field.coeff_p;
            b += w * field.coeff_sv;
        }
        ModalSolidField::new(first.material, first.degree, a, b)
    }
}

/// `j_l''(x)` from the spherical Bessel equation.
fn second_derivative(l: u32, x: f64, j: f64, j_prime: f64) -> f64 {
    let ll = (l * (l + 1)) as f64;
    -(2.0 / x) * j_prime - (1.0 - ll / (x * x)) * j
}

/// Traction coefficients from sampled radial data.
pub fn traction_from_sample(
    material: &MaterialParams,
    degree: u32,
    r: f64,
    s: &SolidSample,
) -> (f64, f64) {
    let tau_rr = material.lambda * s.div + 2.0 * material.mu * s.f_d;
    let tau_rt = if degree == 0 {
        0.0
    } else {
        material.mu * (s.g_d + (s.f - s.g) / r)
    };
    (tau_rr, tau_rt)
}

/// Jacobian of `(tau_rr, tau_rt)` at radius `r` with respect to `(A, B)`.
///
/// The shear column is zero at `l = 0`.
pub fn traction_matrix(
    material: &MaterialParams,
    degree: u32,
    r: f64,
) -> Result<[[f64; 2]; 2], Error> {
    let unit_p = ModalSolidField::new(*material, degree, 1.0, 0.0)?;
    let (rr_p, rt_p) = unit_p.traction(r);
    if degree == 0 {
        return Ok([[rr_p, 0.0], [rt_p, 0.0]]);
    }
    let unit_sv = ModalSolidField::new(*material, degree, 0.0, 1.0)?;
    let (rr_s, rt_s) = unit_sv.traction(r);
    Ok([[rr_p, rr_s], [rt_p, rt_s]])
}

/// Smooth radial bump `chi` supported in `[R/2, R]` with `chi(R) = 1` and
/// first derivatives vanishing at both ends of the ramp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedForcing {
    degree: u32,
    amplitude: f64,
    radius: f64,
    material: MaterialParams,
}

/// Builds the manufactured interior forcing for one mode.
pub fn manufactured_forcing(
    material: &MaterialParams,
    radius: f64,
    degree: u32,
    amplitude: f64,
) -> Result<ManufacturedForcing, Error> {
    if degree > L_MAX {
        return Err(Error::Domain(format!(
            "degree {degree} exceeds the supported maximum {L_MAX}"
        )));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Domain(format!(
            "forcing radius must be positive, got {radius}"
        )));
    }
    if !amplitude.is_finite() {
        return Err(Error::Domain("forcing amplitude must be finite".into()));
    }
    Ok(ManufacturedForcing {
        degree,
        amplitude,
        radius,
        material: *material,
    })
}

impl ManufacturedForcing {
    /// Spherical-harmonic degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Amplitude of the displacement bump.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Ball radius `R` the bump is built on.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Material the forcing is defined against.
    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    /// Quintic ramp value at radius `r`.
    pub fn chi(&self, r: f64) -> f64 {
        let s = 2.0 * r / self.radius - 1.0;
        if s <= 0.0 {
            0.0
        } else if s >= 1.0 {
            1.0
        } else {
            s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
        }
    }

    /// `chi'(r)`.
    pub fn chi_d(&self, r: f64) -> f64 {
        let s = 2.0 * r / self.radius - 1.0;
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            (2.0 / self.radius) * 30.0 * s * s * (1.0 - s) * (1.0 - s)
        }
    }

    /// `chi''(r)`.
    pub fn chi_dd(&self, r: f64) -> f64 {
        let s = 2.0 * r / self.radius - 1.0;
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            (4.0 / (self.radius * self.radius)) * 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
        }
    }

    /// Radial displacement coefficient `amplitude * chi(r)` of the bump.
    pub fn up_radial(&self, r: f64) -> f64 {
        self.amplitude * self.chi(r)
    }

    /// Derivative of the radial displacement coefficient.
    pub fn up_radial_d(&self, r: f64) -> f64 {
        self.amplitude * self.chi_d(r)
    }

    /// Normal displacement trace `u_p . e_r` at `r = R` (equals the amplitude).
    pub fn un_trace(&self) -> f64 {
        self.amplitude
    }

    /// Radial traction trace of the bump at `r = R`.
    pub fn trr_trace(&self) -> f64 {
        let m = &self.material;
        let r = self.radius;
        // (lambda + 2 mu) chi'(R) amplitude + 2 lambda amplitude / R, with
        // chi'(R) = 0 by construction
        (m.lambda + 2.0 * m.mu) * self.up_radial_d(r) + 2.0 * m.lambda * self.up_radial(r) / r
    }

    /// Shear traction trace of the bump at `r = R` (zero at `l = 0`).
    pub fn trt_trace(&self) -> f64 {
        if self.degree == 0 {
            0.0
        } else {
            // mu (g' + (f - g)/r) with g = 0
            self.material.mu * self.up_radial(self.radius) / self.radius
        }
    }

    /// Body force `(F_r, F_t)` obtained by pushing the bump through the
    /// Navier operator; supported in `[R/2, R]` and independent of the layer.
    pub fn body_force(&self, r: f64) -> (f64, f64) {
        let m = &self.material;
        let ll = (self.degree * (self.degree + 1)) as f64;
        let f = self.up_radial(r);
        let fd = self.up_radial_d(r);
        let fdd = self.amplitude * self.chi_dd(r);
        let lam_mu = m.lambda + m.mu;
        let om2rho = m.omega * m.omega * m.rho_s;
        // divergence of u_p: D = f' + 2 f / r (the bump has no tangential part)
        let fr = lam_mu * (fdd + 2.0 * fd / r - 2.0 * f / (r * r))
            + m.mu * (fdd + 2.0 * fd / r - (ll + 2.0) * f / (r * r))
            + om2rho * f;
        let ft = if self.degree == 0 {
            0.0
        } else {
            lam_mu * (fd + 2.0 * f / r) / r + 2.0 * m.mu * f / (r * r)
        };
        (fr, ft)
    }
}
