//! Per-mode solves: the exact transmission problem, its impedance-condition
//! reductions, and the thin-layer multiscale expansion.
//!
//! On degree `l` everything reduces to small dense systems in the radial
//! coefficients. The transmission problem couples the solid pair `(A, B)`
//! to the fluid pair `(a, b)` through four interface rows; an impedance
//! condition eliminates the fluid and leaves the 2x2 traction system (1x1
//! at `l = 0`, where no shear direction exists). The expansion terms `u_n`
//! and layer profiles `p_n(Y)` are built from the same traction system fed
//! by the profile traces.
//!
//! All solves gate on [`resonance_margin`]: the underlying well-posedness
//! assumption is that `omega` is not a traction-free eigenfrequency of the
//! solid, and near such a frequency the coefficient systems degenerate.

use crate::bessel::bessel_eval;
use crate::elastic::{
    traction_matrix, ManufacturedForcing, MaterialParams, ModalSolidField,
};
use crate::error::Error;
use crate::fluid::ModalFluidField;
use crate::geometry::{scaled_laplacian_symbols, SphereGeometry, Surface};
use crate::linalg::solve_dense;
use crate::norms::{fluid_error_norm, solid_error_norm, ModalNorm, NormRule};
use crate::operators::elasto_symbol;
use crate::poly::Polynomial;
use crate::{CONDITION_LIMIT, RESONANCE_MARGIN_TOL};

/// Interface and outer-boundary residuals of a transmission solve, each
/// normalized by the largest assembled system entry.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryResiduals {
    /// `|tau_rr(R) + p(R)|`, the normal traction balance.
    pub traction_normal: f64,
    /// `|tau_rt(R)|`, the shear-free interface condition.
    pub traction_shear: f64,
    /// `|p'(R) - rho_f omega^2 u_r(R)|`, the kinematic coupling.
    pub normal_velocity: f64,
    /// `|p(R + eps)|`, the pressure-release outer boundary.
    pub outer_pressure: f64,
}

impl BoundaryResiduals {
    /// Largest of the four residuals.
    pub fn max(&self) -> f64 {
        self.traction_normal
            .max(self.traction_shear)
            .max(self.normal_velocity)
            .max(self.outer_pressure)
    }
}

/// Solution of the coupled fluid-solid problem on one mode.
///
/// The solid field stored here is the homogeneous Bessel part; the total
/// displacement adds the manufactured particular field, which is shared by
/// every reduced problem built from the same forcing and therefore cancels
/// in all error norms.
#[derive(Debug, Clone)]
pub struct TransmissionSolution {
    solid: ModalSolidField,
    fluid: ModalFluidField,
    forcing: ManufacturedForcing,
    geometry: SphereGeometry,
    conditioning: f64,
    // largest |entry| of the assembled system, the residual scale
    scale: f64,
}

impl TransmissionSolution {
    /// Homogeneous solid part.
    pub fn solid(&self) -> &ModalSolidField {
        &self.solid
    }

    /// Fluid pressure field in the layer.
    pub fn fluid(&self) -> &ModalFluidField {
        &self.fluid
    }

    /// Forcing the problem was solved with.
    pub fn forcing(&self) -> &ManufacturedForcing {
        &self.forcing
    }

    /// Geometry the problem was solved on.
    pub fn geometry(&self) -> &SphereGeometry {
        &self.geometry
    }

    /// Condition estimate of the assembled system.
    pub fn conditioning(&self) -> f64 {
        self.conditioning
    }

    /// Total radial displacement coefficient at radius `r`, particular
    /// field included.
    pub fn total_radial(&self, r: f64) -> f64 {
        self.solid.sample(r).f + self.forcing.up_radial(r)
    }

    /// Total tangential displacement coefficient at radius `r`.
    pub fn total_tangential(&self, r: f64) -> f64 {
        self.solid.sample(r).g
    }

    /// Evaluates the four interface/boundary residuals of the solve.
    pub fn boundary_residuals(&self) -> BoundaryResiduals {
        let radius = self.geometry.radius();
        let (tau_rr, tau_rt) = self.solid.traction(radius);
        let u_r = self.solid.sample(radius).f + self.forcing.un_trace();
        let w = self.forcing.material().coupling();
        BoundaryResiduals {
            traction_normal: (tau_rr + self.forcing.trr_trace() + self.fluid.pressure(radius))
                .abs()
                / self.scale,
            traction_shear: (tau_rt + self.forcing.trt_trace()).abs() / self.scale,
            normal_velocity: (self.fluid.pressure_d(radius) - w * u_r).abs() / self.scale,
            outer_pressure: self.fluid.pressure(self.geometry.outer_radius()).abs() / self.scale,
        }
    }
}

/// Solution of one impedance-condition problem.
#[derive(Debug, Clone)]
pub struct EcSolution {
    order: u32,
    eps: f64,
    symbol: f64,
    conditioning: f64,
    field: ModalSolidField,
    forcing: ManufacturedForcing,
}

impl EcSolution {
    /// Condition order `k`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Layer thickness the impedance symbol was evaluated at.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Impedance symbol value `beta_k`.
    pub fn symbol(&self) -> f64 {
        self.symbol
    }

    /// Condition estimate of the reduced system.
    pub fn conditioning(&self) -> f64 {
        self.conditioning
    }

    /// Homogeneous solid part of the solution.
    pub fn field(&self) -> &ModalSolidField {
        &self.field
    }

    /// Forcing the problem was solved with.
    pub fn forcing(&self) -> &ManufacturedForcing {
        &self.forcing
    }
}

/// Terms of the two-scale expansion on one mode: solid fields `u_0..u_N`,
/// layer profiles `p_0..p_N` in the stretched coordinate `Y = (r - R)/eps`,
/// and the interface traces `gamma_j = u_j . n` at `r = R` that feed each
/// successive profile.
#[derive(Debug, Clone)]
pub struct ExpansionSet {
    degree: u32,
    material: MaterialParams,
    radius: f64,
    forcing: ManufacturedForcing,
    terms: Vec<ModalSolidField>,
    profiles: Vec<Polynomial>,
    gammas: Vec<f64>,
}

impl ExpansionSet {
    /// Spherical-harmonic degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Highest expansion order built.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// Material the expansion was built for.
    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    /// Interface radius.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Forcing shared by all terms.
    pub fn forcing(&self) -> &ManufacturedForcing {
        &self.forcing
    }

    /// Homogeneous part of the solid term `u_j`.
    pub fn term(&self, j: usize) -> &ModalSolidField {
        &self.terms[j]
    }

    /// Layer profile `p_j` as a polynomial in `Y`.
    pub fn profile(&self, j: usize) -> &Polynomial {
        &self.profiles[j]
    }

    /// Interface trace `gamma_j = u_j . n` at `r = R` (particular field
    /// included for `j = 0`).
    pub fn gamma(&self, j: usize) -> f64 {
        self.gammas[j]
    }

    /// Truncated solid sum `sum_{j<=n} eps^j u_j` (homogeneous parts).
    pub fn solid_partial(&self, eps: f64, n: usize) -> Result<ModalSolidField, Error> {
        self.check_order(n)?;
        let mut weights = Vec::with_capacity(n + 1);
        let mut w = 1.0;
        for term in self.terms.iter().take(n + 1) {
            weights.push((w, term));
            w *= eps;
        }
        ModalSolidField::superpose(&weights)
    }

    /// Truncated layer pressure `sum_{j<=n} eps^j p_j((r - R)/eps)`.
    pub fn pressure_partial(&self, eps: f64, n: usize, r: f64) -> Result<f64, Error> {
        self.check_order(n)?;
        self.check_eps(eps)?;
        let y = (r - self.radius) / eps;
        let mut sum = 0.0;
        let mut w = 1.0;
        for profile in self.profiles.iter().take(n + 1) {
            sum += w * profile.eval(y);
            w *= eps;
        }
        Ok(sum)
    }

    /// Radial derivative of the truncated layer pressure; each profile
    /// differentiates as `d/dr = eps^{-1} d/dY`.
    pub fn pressure_partial_d(&self, eps: f64, n: usize, r: f64) -> Result<f64, Error> {
        self.check_order(n)?;
        self.check_eps(eps)?;
        let y = (r - self.radius) / eps;
        let mut sum = 0.0;
        let mut w = 1.0 / eps;
        for profile in self.profiles.iter().take(n + 1) {
            sum += w * profile.derivative().eval(y);
            w *= eps;
        }
        Ok(sum)
    }

    /// Recomputes every profile by integrating its Sturm-Liouville problem
    /// directly: `p_n'' = -(L1 p_{n-1} + L2 p_{n-2})` with slope datum
    /// `p_n'(0) = rho_f omega^2 gamma_{n-1}` and `p_n(1) = 0`. Closed forms
    /// and recurrence must agree to rounding; the cross-check guards both.
    pub fn recurrence_profiles(&self) -> Result<Vec<Polynomial>, Error> {
        let geom = SphereGeometry::new(self.radius, 0.0)?;
        let ops = scaled_laplacian_symbols(&geom, self.degree, self.material.kappa())?;
        let w = self.material.coupling();
        let mut out = vec![Polynomial::zero()];
        for n in 1..self.profiles.len() {
            let mut rhs = ops.l1_poly(&out[n - 1]);
            if n >= 2 {
                rhs = rhs.add(&ops.l2_poly(&out[n - 2]));
            }
            // p_n'' = -rhs; integrate twice, fixing p'(0) then p(1)
            let slope = rhs.scale(-1.0).antiderivative();
            let slope = slope.add(&Polynomial::new(vec![w * self.gammas[n - 1]]));
            let prim = slope.antiderivative();
            let shift = prim.eval(1.0);
            out.push(prim.sub(&Polynomial::new(vec![shift])));
        }
        Ok(out)
    }

    fn check_order(&self, n: usize) -> Result<(), Error> {
        if n > self.order() {
            return Err(Error::Domain(format!(
                "expansion was built to order {}, order {n} requested",
                self.order()
            )));
        }
        Ok(())
    }

    fn check_eps(&self, eps: f64) -> Result<(), Error> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::Domain(format!(
                "layer evaluation needs eps > 0, got {eps}"
            )));
        }
        Ok(())
    }
}

/// Normalized determinant of the traction-free coefficient system.
///
/// For `l >= 1` this is `|det|` of the 2x2 traction matrix after its
/// columns are equilibrated to unit norm, divided by the product of its
/// row norms, a scale-free number in `[0, 1]`. The equilibration matters:
/// the raw pressure and shear columns carry `j_l(k_p R)` and `j_l(k_s R)`
/// scales that drift apart exponentially in `l`, which would depress the
/// bare row-normalized determinant far from any eigenfrequency. At `l = 0`
/// the system is 1x1 and the determinant is instead normalized by the sum
/// of the magnitudes of its two physical summands `lambda div` and
/// `2 mu f'`, which keeps the margin scale-free and sensitive to their
/// cancellation.
pub fn resonance_margin(mat: &MaterialParams, radius: f64, l: u32) -> Result<f64, Error> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Domain(format!(
            "interface radius must be positive, got {radius}"
        )));
    }
    if l == 0 {
        let unit = ModalSolidField::new(*mat, 0, 1.0, 0.0)?;
        let s = unit.sample(radius);
        let dilatational = mat.lambda * s.div;
        let radial = 2.0 * mat.mu * s.f_d;
        let scale = dilatational.abs() + radial.abs();
        if scale == 0.0 {
            return Ok(0.0);
        }
        return Ok((dilatational + radial).abs() / scale);
    }
    let t = traction_matrix(mat, l, radius)?;
    let c0 = t[0][0].hypot(t[1][0]);
    let c1 = t[0][1].hypot(t[1][1]);
    if c0 == 0.0 || c1 == 0.0 {
        return Ok(0.0);
    }
    let t = [[t[0][0] / c0, t[0][1] / c1], [t[1][0] / c0, t[1][1] / c1]];
    let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    let r0 = t[0][0].hypot(t[0][1]);
    let r1 = t[1][0].hypot(t[1][1]);
    if r0 == 0.0 || r1 == 0.0 {
        return Ok(0.0);
    }
    Ok(det.abs() / (r0 * r1))
}

fn check_forcing(
    mat: &MaterialParams,
    radius: f64,
    l: u32,
    forcing: &ManufacturedForcing,
) -> Result<(), Error> {
    if forcing.degree() != l {
        return Err(Error::ModeMismatch(format!(
            "forcing is built on degree {}, solve requested degree {l}",
            forcing.degree()
        )));
    }
    if forcing.material() != mat {
        return Err(Error::ModeMismatch(
            "forcing and solve use different material parameters".into(),
        ));
    }
    if forcing.radius() != radius {
        return Err(Error::ModeMismatch(format!(
            "forcing is built for radius {}, solve uses {radius}",
            forcing.radius()
        )));
    }
    Ok(())
}

fn margin_gate(mat: &MaterialParams, radius: f64, l: u32) -> Result<(), Error> {
    let margin = resonance_margin(mat, radius, l)?;
    if margin < RESONANCE_MARGIN_TOL {
        return Err(Error::Resonance {
            omega: mat.omega,
            degree: l,
            margin,
            tolerance: RESONANCE_MARGIN_TOL,
        });
    }
    Ok(())
}

/// Solves the coupled transmission problem on degree `l`.
///
/// Unknowns are the solid pair `(A, B)` and the fluid pair `(a, b)`; the
/// rows are the normal traction balance, the shear-free condition, the
/// kinematic coupling `p' = rho_f omega^2 u_r`, and the pressure-release
/// outer boundary. At `l = 0` the shear row and column drop out.
pub fn solve_transmission(
    mat: &MaterialParams,
    geom: &SphereGeometry,
    l: u32,
    forcing: &ManufacturedForcing,
) -> Result<TransmissionSolution, Error> {
    let radius = geom.radius();
    let eps = geom.thickness();
    if eps <= 0.0 {
        return Err(Error::Domain(
            "transmission problem needs a layer of positive thickness".into(),
        ));
    }
    check_forcing(mat, radius, l, forcing)?;
    margin_gate(mat, radius, l)?;

    let kappa = mat.kappa();
    let w = mat.coupling();
    let t = traction_matrix(mat, l, radius)?;
    let f_p = ModalSolidField::new(*mat, l, 1.0, 0.0)?.sample(radius).f;
    let inner = bessel_eval(l, kappa * radius)?;
    let outer = bessel_eval(l, kappa * geom.outer_radius())?;

    let (matrix, rhs, n) = if l == 0 {
        // columns (A, a, b)
        (
            vec![
                t[0][0], inner.j, inner.y, //
                -w * f_p, kappa * inner.j_prime, kappa * inner.y_prime, //
                0.0, outer.j, outer.y,
            ],
            vec![-forcing.trr_trace(), w * forcing.un_trace(), 0.0],
            3,
        )
    } else {
        let f_sv = ModalSolidField::new(*mat, l, 0.0, 1.0)?.sample(radius).f;
        // columns (A, B, a, b)
        (
            vec![
                t[0][0], t[0][1], inner.j, inner.y, //
                t[1][0], t[1][1], 0.0, 0.0, //
                -w * f_p, -w * f_sv, kappa * inner.j_prime, kappa * inner.y_prime, //
                0.0, 0.0, outer.j, outer.y,
            ],
            vec![
                -forcing.trr_trace(),
                -forcing.trt_trace(),
                w * forcing.un_trace(),
                0.0,
            ],
            4,
        )
    };
    let scale = matrix
        .iter()
        .chain(rhs.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));

    // Equilibrate the unknown columns before factoring. The fluid basis
    // values j_l and y_l drift apart exponentially in l at small kappa R,
    // which makes the raw system look singular far from any resonance.
    // Rescaling the unknowns is exact (undone below) and the condition
    // estimate then measures genuine degeneracy, not column imbalance.
    let mut col = vec![0.0f64; n];
    for i in 0..n {
        for (j, c) in col.iter_mut().enumerate() {
            *c = c.max(matrix[i * n + j].abs());
        }
    }
    for c in &mut col {
        if *c == 0.0 {
            *c = 1.0;
        }
    }
    let mut matrix = matrix;
    for i in 0..n {
        for (j, c) in col.iter().enumerate() {
            matrix[i * n + j] /= c;
        }
    }

    let solved = solve_dense(&matrix, &rhs, n).map_err(|_| Error::NearSingular {
        condition: f64::INFINITY,
        limit: CONDITION_LIMIT,
    })?;
    if solved.condition > CONDITION_LIMIT {
        return Err(Error::NearSingular {
            condition: solved.condition,
            limit: CONDITION_LIMIT,
        });
    }
    let x: Vec<f64> = solved.x.iter().zip(&col).map(|(v, c)| v / c).collect();

    let (solid, fluid) = if l == 0 {
        (
            ModalSolidField::new(*mat, l, x[0], 0.0)?,
            ModalFluidField::new(*mat, l, x[1], x[2])?,
        )
    } else {
        (
            ModalSolidField::new(*mat, l, x[0], x[1])?,
            ModalFluidField::new(*mat, l, x[2], x[3])?,
        )
    };
    Ok(TransmissionSolution {
        solid,
        fluid,
        forcing: *forcing,
        geometry: *geom,
        conditioning: solved.condition,
        scale,
    })
}

/// Solves the order-`k` impedance-condition problem on degree `l`.
///
/// The condition replaces the fluid layer by the symbol `beta_k`: the
/// normal traction row becomes `tau_rr(R) + beta u_r(R) = 0` for the total
/// field, the shear row is unchanged. `eps = 0` gives `beta = 0` and hence
/// the traction-free limit for every order.
pub fn solve_ec(
    k: u32,
    mat: &MaterialParams,
    radius: f64,
    eps: f64,
    l: u32,
    forcing: &ManufacturedForcing,
) -> Result<EcSolution, Error> {
    check_forcing(mat, radius, l, forcing)?;
    let geom = SphereGeometry::new(radius, 0.0)?;
    let beta = elasto_symbol(k, eps, &geom, mat, l)?;
    margin_gate(mat, radius, l)?;

    let t = traction_matrix(mat, l, radius)?;
    let f_p = ModalSolidField::new(*mat, l, 1.0, 0.0)?.sample(radius).f;
    let rhs_rr = -(forcing.trr_trace() + beta * forcing.un_trace());

    let (matrix, rhs, n) = if l == 0 {
        (vec![t[0][0] + beta * f_p], vec![rhs_rr], 1)
    } else {
        let f_sv = ModalSolidField::new(*mat, l, 0.0, 1.0)?.sample(radius).f;
        (
            vec![
                t[0][0] + beta * f_p,
                t[0][1] + beta * f_sv,
                t[1][0],
                t[1][1],
            ],
            vec![rhs_rr, -forcing.trt_trace()],
            2,
        )
    };

    // equilibrate unknown columns exactly as in resonance_margin and
    // solve_transmission, so near-singularity means degeneracy and not the
    // j_l/y_l scale gap between the pressure and shear basis fields
    let mut col = vec![0.0f64; n];
    for i in 0..n {
        for (j, c) in col.iter_mut().enumerate() {
            *c = c.max(matrix[i * n + j].abs());
        }
    }
    for c in &mut col {
        if *c == 0.0 {
            *c = 1.0;
        }
    }
    let mut matrix = matrix;
    for i in 0..n {
        for (j, c) in col.iter().enumerate() {
            matrix[i * n + j] /= c;
        }
    }

    // the impedance perturbation can degenerate the system on its own, so
    // gate on the assembled matrix as well
    let margin = if l == 0 {
        let scale = t[0][0].abs() + (beta * f_p).abs();
        if scale == 0.0 {
            0.0
        } else {
            (t[0][0] + beta * f_p).abs() / scale
        }
    } else {
        let det = matrix[0] * matrix[3] - matrix[1] * matrix[2];
        let r0 = matrix[0].hypot(matrix[1]);
        let r1 = matrix[2].hypot(matrix[3]);
        if r0 == 0.0 || r1 == 0.0 {
            0.0
        } else {
            det.abs() / (r0 * r1)
        }
    };
    if margin < RESONANCE_MARGIN_TOL {
        return Err(Error::Resonance {
            omega: mat.omega,
            degree: l,
            margin,
            tolerance: RESONANCE_MARGIN_TOL,
        });
    }

    let solved = solve_dense(&matrix, &rhs, n).map_err(|_| Error::NearSingular {
        condition: f64::INFINITY,
        limit: CONDITION_LIMIT,
    })?;
    if solved.condition > CONDITION_LIMIT {
        return Err(Error::NearSingular {
            condition: solved.condition,
            limit: CONDITION_LIMIT,
        });
    }
    let x: Vec<f64> = solved.x.iter().zip(&col).map(|(v, c)| v / c).collect();
    let field = if l == 0 {
        ModalSolidField::new(*mat, l, x[0], 0.0)?
    } else {
        ModalSolidField::new(*mat, l, x[0], x[1])?
    };
    Ok(EcSolution {
        order: k,
        eps,
        symbol: beta,
        conditioning: solved.condition,
        field,
        forcing: *forcing,
    })
}

/// Builds the expansion terms and layer profiles up to order `n <= 3`.
///
/// `u_0` solves the traction-free problem with the forcing; thereafter the
/// orders alternate. The profile `p_j` solves a Sturm-Liouville problem on
/// `Y in (0, 1)` whose slope datum at `Y = 0` is `rho_f omega^2 gamma_{j-1}`
/// and whose Dirichlet end is `p_j(1) = 0`; the solid term `u_j` then
/// solves the traction problem with normal datum `-p_j(0)`.
pub fn multiscale_terms(
    mat: &MaterialParams,
    geom: &SphereGeometry,
    l: u32,
    forcing: &ManufacturedForcing,
    n: u32,
) -> Result<ExpansionSet, Error> {
    if n > 3 {
        return Err(Error::Domain(format!(
            "expansion terms are available to order 3, order {n} requested"
        )));
    }
    let radius = geom.radius();
    check_forcing(mat, radius, l, forcing)?;
    margin_gate(mat, radius, l)?;

    let w = mat.coupling();
    let h = geom.mean_curvature();
    let gauss = geom.gaussian_curvature();
    let lam = geom.lb_symbol(l);
    let kappa_sq = mat.kappa() * mat.kappa();

    let u0 = solve_ec(0, mat, radius, 0.0, l, forcing)?;
    let mut terms = vec![*u0.field()];
    let mut profiles = vec![Polynomial::zero()];
    let mut gammas = vec![terms[0].sample(radius).f + forcing.un_trace()];

    let t = traction_matrix(mat, l, radius)?;
    for j in 1..=n as usize {
        let profile = match j {
            // p_1 = W g0 (Y - 1)
            1 => Polynomial::new(vec![-w * gammas[0], w * gammas[0]]),
            // p_2 = -H W g0 (Y^2 - 1) + W g1 (Y - 1)
            2 => Polynomial::new(vec![
                h * w * gammas[0] - w * gammas[1],
                w * gammas[1],
                -h * w * gammas[0],
            ]),
            // p_3 = c3 (Y^3 - 1) + c2 (Y^2 - 1) + W g2 (Y - 1) with
            // c3 = (W g0 / 6)(8H^2 - 2K - (lb + kappa^2)),
            // c2 = (W / 2)((lb + kappa^2) g0 - 2 H g1)
            3 => {
                let c3 = w * gammas[0] / 6.0 * (8.0 * h * h - 2.0 * gauss - (lam + kappa_sq));
                let c2 = w / 2.0 * ((lam + kappa_sq) * gammas[0] - 2.0 * h * gammas[1]);
                let c1 = w * gammas[2];
                Polynomial::new(vec![-c3 - c2 - c1, c1, c2, c3])
            }
            _ => unreachable!(),
        };

        // T(u_j) = -p_j(0) n
        let datum = -profile.eval(0.0);
        let (matrix, rhs, size) = if l == 0 {
            (vec![t[0][0]], vec![datum], 1)
        } else {
            (
                vec![t[0][0], t[0][1], t[1][0], t[1][1]],
                vec![datum, 0.0],
                2,
            )
        };
        let solved = solve_dense(&matrix, &rhs, size).map_err(|_| Error::NearSingular {
            condition: f64::INFINITY,
            limit: CONDITION_LIMIT,
        })?;
        let field = if l == 0 {
            ModalSolidField::new(*mat, l, solved.x[0], 0.0)?
        } else {
            ModalSolidField::new(*mat, l, solved.x[0], solved.x[1])?
        };
        gammas.push(field.sample(radius).f);
        terms.push(field);
        profiles.push(profile);
    }

    Ok(ExpansionSet {
        degree: l,
        material: *mat,
        radius,
        forcing: *forcing,
        terms,
        profiles,
        gammas,
    })
}

/// Remainder norms of the order-`n` truncated expansion against an exact
/// transmission solve at the same thickness: the solid H1-equivalent norm
/// of `u_eps - sum eps^j u_j` and the sqrt(eps)-weighted layer norm of
/// `p_eps - sum eps^j p_j`.
pub fn remainder(
    exact: &TransmissionSolution,
    expansion: &ExpansionSet,
    eps: f64,
    n: usize,
) -> Result<(ModalNorm, ModalNorm), Error> {
    if exact.solid().degree() != expansion.degree() {
        return Err(Error::ModeMismatch(format!(
            "transmission solve is on degree {}, expansion on degree {}",
            exact.solid().degree(),
            expansion.degree()
        )));
    }
    if exact.forcing() != expansion.forcing() {
        return Err(Error::ModeMismatch(
            "transmission solve and expansion use different forcing".into(),
        ));
    }
    if eps != exact.geometry().thickness() {
        return Err(Error::Domain(format!(
            "remainder requested at eps = {eps}, transmission solve used {}",
            exact.geometry().thickness()
        )));
    }
    let rule = NormRule::default();
    let partial = expansion.solid_partial(eps, n)?;
    let solid = solid_error_norm(exact.solid(), &partial, expansion.radius(), &rule)?;
    let fluid = fluid_error_norm(exact.fluid(), expansion, eps, n, &rule)?;
    Ok((solid, fluid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elastic::manufactured_forcing;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn acceptance_material() -> MaterialParams {
        MaterialParams::new(1.0, 2.0, 1.0, 0.5, 1.0, 1.3).unwrap()
    }

    fn forcing_for(mat: &MaterialParams, l: u32) -> ManufacturedForcing {
        manufactured_forcing(mat, 1.0, l, 1.0).unwrap()
    }

    #[test]
    fn acceptance_margins_are_comfortable() {
        let mat = acceptance_material();
        for l in [0, 1, 2, 5] {
            let margin = resonance_margin(&mat, 1.0, l).unwrap();
            assert!(margin > 1e-3, "margin at l = {l} is {margin}");
        }
    }

    #[test]
    fn margin_is_scale_free() {
        let mat = acceptance_material();
        // scaling rho_s, lambda, mu together keeps both wavenumbers and
        // multiplies every traction row by the same factor
        let scaled = MaterialParams::new(4.0, 8.0, 4.0, 0.5, 1.0, 1.3).unwrap();
        for l in [0, 3] {
            let a = resonance_margin(&mat, 1.0, l).unwrap();
            let b = resonance_margin(&scaled, 1.0, l).unwrap();
            assert!(a > 0.0 && a <= 1.0);
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn transmission_boundary_residuals_are_machine_scale() {
        let mat = acceptance_material();
        for l in [0, 1, 2, 5] {
            let forcing = forcing_for(&mat, l);
            for eps in [0.2, 0.05, 0.0125] {
                let geom = SphereGeometry::new(1.0, eps).unwrap();
                let sol = solve_transmission(&mat, &geom, l, &forcing).unwrap();
                let res = sol.boundary_residuals();
                assert!(
                    res.max() < 1e-10,
                    "residuals at l = {l}, eps = {eps}: {res:?}"
                );
            }
        }
    }

    #[test]
    fn decoupled_fluid_reduces_to_traction_free_solid() {
        let mat = MaterialParams::new(1.0, 2.0, 1.0, 0.0, 1.0, 1.3).unwrap();
        let geom = SphereGeometry::new(1.0, 0.15).unwrap();
        for l in [0, 2] {
            let forcing = forcing_for(&mat, l);
            let sol = solve_transmission(&mat, &geom, l, &forcing).unwrap();
            assert_eq!(sol.fluid().coeff_j(), 0.0);
            assert_eq!(sol.fluid().coeff_y(), 0.0);
            let ec = solve_ec(0, &mat, 1.0, 0.15, l, &forcing).unwrap();
            assert_relative_eq!(
                sol.solid().coeff_p(),
                ec.field().coeff_p(),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                sol.solid().coeff_sv(),
                ec.field().coeff_sv(),
                max_relative = 1e-14,
                epsilon = 1e-300
            );
        }
    }

    #[test]
    fn vanishing_thickness_gives_the_traction_free_limit() {
        let mat = acceptance_material();
        let forcing = forcing_for(&mat, 2);
        let base = solve_ec(0, &mat, 1.0, 0.4, 2, &forcing).unwrap();
        for k in 0..=3 {
            let sol = solve_ec(k, &mat, 1.0, 0.0, 2, &forcing).unwrap();
            assert_eq!(sol.symbol(), 0.0);
            assert_eq!(sol.field().coeff_p(), base.field().coeff_p());
            assert_eq!(sol.field().coeff_sv(), base.field().coeff_sv());
        }
    }

    #[test]
    fn order_zero_is_thickness_independent() {
        let mat = acceptance_material();
        let forcing = forcing_for(&mat, 1);
        let a = solve_ec(0, &mat, 1.0, 0.05, 1, &forcing).unwrap();
        let b = solve_ec(0, &mat, 1.0, 0.3, 1, &forcing).unwrap();
        assert_eq!(a.field().coeff_p(), b.field().coeff_p());
        assert_eq!(a.field().coeff_sv(), b.field().coeff_sv());
    }

    #[test]
    fn solutions_scale_linearly_with_amplitude() {
        let mat = acceptance_material();
        let geom = SphereGeometry::new(1.0, 0.1).unwrap();
        let unit = manufactured_forcing(&mat, 1.0, 2, 1.0).unwrap();
        let scaled = manufactured_forcing(&mat, 1.0, 2, 2.5).unwrap();
        let t1 = solve_transmission(&mat, &geom, 2, &unit).unwrap();
        let t2 = solve_transmission(&mat, &geom, 2, &scaled).unwrap();
        assert_relative_eq!(
            t2.solid().coeff_p(),
            2.5 * t1.solid().coeff_p(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            t2.fluid().coeff_j(),
            2.5 * t1.fluid().coeff_j(),
            max_relative = 1e-13
        );
        let e1 = solve_ec(2, &mat, 1.0, 0.1, 2, &unit).unwrap();
        let e2 = solve_ec(2, &mat, 1.0, 0.1, 2, &scaled).unwrap();
        assert_relative_eq!(
            e2.field().coeff_sv(),
            2.5 * e1.field().coeff_sv(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn profiles_satisfy_their_boundary_data() {
        let mat = acceptance_material();
        let geom = SphereGeometry::new(1.0, 0.1).unwrap();
        for l in [0, 1, 5] {
            let forcing = forcing_for(&mat, l);
            let set = multiscale_terms(&mat, &geom, l, &forcing, 3).unwrap();
            assert!(set.profile(0).is_zero());
            let w = mat.coupling();
            for j in 1..=3 {
                // Dirichlet end exactly, by construction
                assert_eq!(set.profile(j).eval(1.0), 0.0, "p_{j}(1) at l = {l}");
                // slope datum p_j'(0) = W gamma_{j-1}
                let slope = set.profile(j).derivative().eval(0.0);
                assert_relative_eq!(
                    slope,
                    w * set.gamma(j - 1),
                    max_relative = 1e-15,
                    epsilon = 1e-300
                );
            }
        }
    }

    #[test]
    fn first_term_carries_the_printed_traction_datum() {
        let mat = acceptance_material();
        let geom = SphereGeometry::new(1.0, 0.1).unwrap();
        let forcing = forcing_for(&mat, 2);
        let set = multiscale_terms(&mat, &geom, 2, &forcing, 1).unwrap();
        let (tau_rr, tau_rt) = set.term(1).traction(1.0);
        let datum = mat.coupling() * set.gamma(0);
        assert_relative_eq!(tau_rr, datum, max_relative = 1e-12);
        assert!(tau_rt.abs() <= 1e-12 * datum.abs());
    }

    #[test]
    fn recurrence_reproduces_closed_form_profiles() {
        let mat = acceptance_material();
        let geom = SphereGeometry::new(1.0, 0.1).unwrap();
        for l in [0, 2, 5] {
            let forcing = forcing_for(&mat, l);
            let set = multiscale_terms(&mat, &geom, l, &forcing, 3).unwrap();
            let recomputed = set.recurrence_profiles().unwrap();
            for j in 0..=3 {
                let a = set.profile(j);
                let b = &recomputed[j];
                let degree = a.coeffs().len().max(b.coeffs().len());
                for i in 0..degree {
                    let diff = (a.coeff(i) - b.coeff(i)).abs();
                    assert!(
                        diff <= 1e-12 * a.coeff(i).abs().max(1.0),
                        "p_{j} coefficient {i} differs by {diff} at l = {l}"
                    );
                }
            }
        }
    }

    #[test]
    fn decoupled_fluid_kills_every_profile() {
        let mat = MaterialParams::new(1.0, 2.0, 1.0, 0.0, 1.0, 1.3).unwrap();
        let geom = SphereGeometry::new(1.0, 0.1).unwrap();
        let forcing = forcing_for(&mat, 1);
        let set = multiscale_terms(&mat, &geom, 1, &forcing, 3).unwrap();
        for j in 0..=3 {
            assert!(set.profile(j).is_zero(), "p_{j} should vanish");
            if j > 0 {
                assert_eq!(set.term(j).coeff_p(), 0.0);
                assert_eq!(set.term(j).coeff_sv(), 0.0);
            }
        }
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let mat = acceptance_material();
        let geom = SphereGeometry::new(1.0, 0.1).unwrap();
        let forcing = forcing_for(&mat, 2);
        assert!(matches!(
            solve_transmission(&mat, &geom, 3, &forcing),
            Err(Error::ModeMismatch(_))
        ));
        assert!(matches!(
            solve_ec(1, &mat, 2.0, 0.1, 2, &forcing),
            Err(Error::ModeMismatch(_))
        ));
        let other = MaterialParams::new(1.0, 2.0, 1.0, 0.5, 1.0, 1.31).unwrap();
        assert!(matches!(
            solve_ec(1, &other, 1.0, 0.1, 2, &forcing),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn zero_thickness_transmission_is_rejected() {
        let mat = acceptance_material();
        let geom = SphereGeometry::new(1.0, 0.0).unwrap();
        let forcing = forcing_for(&mat, 0);
        assert!(matches!(
            solve_transmission(&mat, &geom, 0, &forcing),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn resonance_is_detected_near_a_traction_free_eigenfrequency() {
        // bisect the l = 0 traction determinant to a root, then solve there
        let make = |omega: f64| MaterialParams::new(1.0, 2.0, 1.0, 0.5, 1.0, omega).unwrap();
        let det = |omega: f64| {
            let t = traction_matrix(&make(omega), 0, 1.0).unwrap();
            t[0][0]
        };
        let mut lo = 1.3;
        let mut hi = lo + 0.05;
        while det(lo) * det(hi) > 0.0 {
            lo = hi;
            hi += 0.05;
            assert!(hi < 40.0, "no traction-free root found");
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if det(lo) * det(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let omega = 0.5 * (lo + hi);
        let mat = make(omega);
        let margin = resonance_margin(&mat, 1.0, 0).unwrap();
        assert!(margin < 1e-6, "bisected margin is {margin}");
        let forcing = manufactured_forcing(&mat, 1.0, 0, 1.0).unwrap();
        assert!(matches!(
            solve_ec(0, &mat, 1.0, 0.0, 0, &forcing),
            Err(Error::Resonance { .. })
        ));
        let geom = SphereGeometry::new(1.0, 0.1).unwrap();
        assert!(matches!(
            solve_transmission(&mat, &geom, 0, &forcing),
            Err(Error::Resonance { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn boundary_residuals_hold_on_random_draws(
            omega in 0.4..2.2f64,
            rho_f in 0.05..2.0f64,
            eps in 0.01..0.3f64,
            l in 0u32..7,
            amplitude in 0.2..3.0f64,
        ) {
            let mat = MaterialParams::new(1.0, 2.0, 1.0, rho_f, 1.0, omega).unwrap();
            prop_assume!(resonance_margin(&mat, 1.0, l).unwrap() > 1e-3);
            let geom = SphereGeometry::new(1.0, eps).unwrap();
            let forcing = manufactured_forcing(&mat, 1.0, l, amplitude).unwrap();
            let sol = solve_transmission(&mat, &geom, l, &forcing).unwrap();
            prop_assert!(sol.boundary_residuals().max() < 1e-10);
        }
    }
}
