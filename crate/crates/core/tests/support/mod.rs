//! Shared helpers for the integration suites.
//!
//! The centerpiece is a finite-difference oracle for the transmission
//! problem that never touches the modal coefficient systems: it
//! discretizes the coupled radial boundary-value problem on a fine grid
//! and solves the resulting banded system directly. Agreement with the
//! closed-form solver is then a genuine two-path check.

#![allow(dead_code)]

use elastoshell::bessel::bessel_eval;
use elastoshell::elastic::{ManufacturedForcing, MaterialParams, ModalSolidField};
use elastoshell::geometry::SphereGeometry;

/// Band matrix with LAPACK-style storage and room for pivoting fill-in.
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<f64>,
}

impl BandMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            ldab,
            ab: vec![0.0; n * ldab],
        }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.kl + self.ku >= j && j + self.kl >= i, "({i},{j}) outside band");
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.ab[s] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.ab[s] = v;
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.ab[self.slot(i, j)]
    }

    /// Gaussian elimination with partial pivoting, right-hand side carried
    /// along. Row swaps can widen the upper bandwidth to `kl + ku`, which
    /// is exactly the fill-in space the storage reserves.
    pub fn solve(mut self, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
        assert_eq!(rhs.len(), self.n);
        let n = self.n;
        let kuf = self.kl + self.ku;
        for j in 0..n {
            let last = (j + self.kl).min(n - 1);
            let mut piv = j;
            for i in j + 1..=last {
                if self.get(i, j).abs() > self.get(piv, j).abs() {
                    piv = i;
                }
            }
            if self.get(piv, j) == 0.0 {
                return None;
            }
            if piv != j {
                let col_end = (j + kuf).min(n - 1);
                for col in j..=col_end {
                    let a = self.get(j, col);
                    let b = self.get(piv, col);
                    self.set(j, col, b);
                    self.set(piv, col, a);
                }
                rhs.swap(j, piv);
            }
            let d = self.get(j, j);
            for i in j + 1..=last {
                let m = self.get(i, j) / d;
                if m == 0.0 {
                    continue;
                }
                let col_end = (j + kuf).min(n - 1);
                for col in j + 1..=col_end {
                    let v = self.get(i, col) - m * self.get(j, col);
                    self.set(i, col, v);
                }
                rhs[i] -= m * rhs[j];
            }
        }
        for i in (0..n).rev() {
            let mut s = rhs[i];
            let col_end = (i + kuf).min(n - 1);
            for col in i + 1..=col_end {
                s -= self.get(i, col) * rhs[col];
            }
            rhs[i] = s / self.get(i, i);
        }
        Some(rhs)
    }
}

/// Grid solution of the coupled radial BVP. `g` is empty for `l = 0`.
pub struct FdTransmission {
    pub r_solid: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub r_fluid: Vec<f64>,
    pub p: Vec<f64>,
}

/// Second-order finite-difference solve of the transmission problem.
///
/// Unknowns are the total radial and tangential solid amplitudes on a
/// uniform grid over [0, R] and the pressure amplitude over [R, R + eps].
/// Interior rows discretize the strong per-mode equations
///
///   (lambda+2mu) D' + mu l(l+1) c / r + omega^2 rho_s f = F_r
///   (lambda+2mu) D/r + mu (c' + c/r)  + omega^2 rho_s g = F_t
///   p'' + 2 p'/r + (kappa^2 - l(l+1)/r^2) p = 0
///
/// with D = f' + 2f/r - l(l+1) g/r and c = g' + (g - f)/r; the junction
/// rows impose the traction, shear, kinematic, and outer-pressure
/// conditions with one-sided second-order stencils.
pub fn fd_transmission(
    mat: &MaterialParams,
    geom: &SphereGeometry,
    l: u32,
    forcing: &ManufacturedForcing,
    solid_nodes: usize,
    fluid_nodes: usize,
) -> FdTransmission {
    assert!(solid_nodes >= 8 && fluid_nodes >= 8);
    let radius = geom.radius();
    let eps = geom.thickness();
    assert!(eps > 0.0);
    let ll = (l * (l + 1)) as f64;
    let lam = mat.lambda;
    let mu = mat.mu;
    let lam2mu = lam + 2.0 * mu;
    let om2rho = mat.omega * mat.omega * mat.rho_s;
    let w = mat.coupling();
    let kap = mat.kappa();

    let ms = solid_nodes;
    let mf = fluid_nodes;
    let h = radius / (ms - 1) as f64;
    let hf = eps / (mf - 1) as f64;
    let r_solid: Vec<f64> = (0..ms).map(|i| i as f64 * h).collect();
    let r_fluid: Vec<f64> = (0..mf).map(|j| radius + j as f64 * hf).collect();

    // one scalar unknown per solid node at l = 0, two otherwise
    let stride = if l == 0 { 1 } else { 2 };
    let n = stride * ms + mf;
    let fi = |i: usize| stride * i;
    let gi = |i: usize| stride * i + 1;
    let pj = |j: usize| stride * ms + j;

    let mut a = BandMatrix::new(n, 5, 5);
    let mut rhs = vec![0.0; n];

    // regularity at the center: the mode amplitudes vanish like r^(l-1) r
    a.set(fi(0), fi(0), 1.0);
    if l > 0 {
        a.set(gi(0), gi(0), 1.0);
    }

    for i in 1..ms - 1 {
        let r = r_solid[i];
        let (fr, ft) = forcing.body_force(r);
        let d1 = 1.0 / (2.0 * h);
        let d2 = 1.0 / (h * h);

        // radial row: coefficients of f'', f', f, g', g
        let row = fi(i);
        let cf2 = lam2mu;
        let cf1 = lam2mu * 2.0 / r;
        let cf0 = -2.0 * lam2mu / (r * r) - mu * ll / (r * r) + om2rho;
        a.add(row, fi(i - 1), cf2 * d2 - cf1 * d1);
        a.add(row, fi(i), -2.0 * cf2 * d2 + cf0);
        a.add(row, fi(i + 1), cf2 * d2 + cf1 * d1);
        if l > 0 {
            let cg1 = -(lam + mu) * ll / r;
            let cg0 = (lam + 3.0 * mu) * ll / (r * r);
            a.add(row, gi(i - 1), -cg1 * d1);
            a.add(row, gi(i), cg0);
            a.add(row, gi(i + 1), cg1 * d1);
        }
        rhs[row] = fr;

        if l > 0 {
            // tangential row: coefficients of g'', g', g, f', f
            let row = gi(i);
            let cg2 = mu;
            let cg1 = 2.0 * mu / r;
            let cg0 = -lam2mu * ll / (r * r) + om2rho;
            let cf1 = (lam + mu) / r;
            let cf0 = 2.0 * lam2mu / (r * r);
            a.add(row, gi(i - 1), cg2 * d2 - cg1 * d1);
            a.add(row, gi(i), -2.0 * cg2 * d2 + cg0);
            a.add(row, gi(i + 1), cg2 * d2 + cg1 * d1);
            a.add(row, fi(i - 1), -cf1 * d1);
            a.add(row, fi(i), cf0);
            a.add(row, fi(i + 1), cf1 * d1);
            rhs[row] = ft;
        }
    }

    // traction balance at r = R: lambda D + 2 mu f' = -p
    let m = ms - 1;
    let one_sided = [3.0 / (2.0 * h), -4.0 / (2.0 * h), 1.0 / (2.0 * h)];
    {
        let row = fi(m);
        for (k, c) in one_sided.iter().enumerate() {
            a.add(row, fi(m - k), lam2mu * c);
        }
        a.add(row, fi(m), 2.0 * lam / radius);
        if l > 0 {
            a.add(row, gi(m), -lam * ll / radius);
        }
        a.add(row, pj(0), 1.0);
        rhs[row] = 0.0;
    }
    // shear-free interface: g' + (f - g)/R = 0
    if l > 0 {
        let row = gi(m);
        for (k, c) in one_sided.iter().enumerate() {
            a.add(row, gi(m - k), *c);
        }
        a.add(row, fi(m), 1.0 / radius);
        a.add(row, gi(m), -1.0 / radius);
        rhs[row] = 0.0;
    }
    // kinematic coupling: p'(R) = W u_r(R)
    {
        let row = pj(0);
        let inward = [-3.0 / (2.0 * hf), 4.0 / (2.0 * hf), -1.0 / (2.0 * hf)];
        for (k, c) in inward.iter().enumerate() {
            a.add(row, pj(k), *c);
        }
        a.add(row, fi(m), -w);
        rhs[row] = 0.0;
    }
    // fluid Helmholtz rows
    for j in 1..mf - 1 {
        let s = r_fluid[j];
        let row = pj(j);
        let d1 = 1.0 / (2.0 * hf);
        let d2 = 1.0 / (hf * hf);
        a.add(row, pj(j - 1), d2 - 2.0 * d1 / s);
        a.add(row, pj(j), -2.0 * d2 + kap * kap - ll / (s * s));
        a.add(row, pj(j + 1), d2 + 2.0 * d1 / s);
        rhs[row] = 0.0;
    }
    a.set(pj(mf - 1), pj(mf - 1), 1.0);
    rhs[pj(mf - 1)] = 0.0;

    let x = a.solve(rhs).expect("finite-difference system is singular");

    let f: Vec<f64> = (0..ms).map(|i| x[fi(i)]).collect();
    let g: Vec<f64> = if l == 0 {
        Vec::new()
    } else {
        (0..ms).map(|i| x[gi(i)]).collect()
    };
    let p: Vec<f64> = (0..mf).map(|j| x[pj(j)]).collect();
    FdTransmission {
        r_solid,
        f,
        g,
        r_fluid,
        p,
    }
}

/// Least-squares extraction of the homogeneous Bessel coefficients (A, B)
/// from grid values of the total solid field. The particular bump is
/// subtracted first; at `l = 0` only A exists and the returned B is 0.
pub fn extract_solid_coeffs(
    mat: &MaterialParams,
    l: u32,
    forcing: &ManufacturedForcing,
    fd: &FdTransmission,
) -> (f64, f64) {
    let p_basis = ModalSolidField::new(*mat, l, 1.0, 0.0).unwrap();
    let sv_basis = (l > 0).then(|| ModalSolidField::new(*mat, l, 0.0, 1.0).unwrap());

    let mut ata = [[0.0f64; 2]; 2];
    let mut atb = [0.0f64; 2];
    for (i, &r) in fd.r_solid.iter().enumerate().skip(1) {
        let sp = p_basis.sample(r);
        let hom_f = fd.f[i] - forcing.up_radial(r);
        let mut rows = vec![([sp.f, 0.0], hom_f)];
        if let Some(sv) = &sv_basis {
            let ss = sv.sample(r);
            rows[0].0[1] = ss.f;
            rows.push(([sp.g, ss.g], fd.g[i]));
        }
        for (a, b) in rows {
            for ii in 0..2 {
                for jj in 0..2 {
                    ata[ii][jj] += a[ii] * a[jj];
                }
                atb[ii] += a[ii] * b;
            }
        }
    }
    if sv_basis.is_none() {
        return (atb[0] / ata[0][0], 0.0);
    }
    let det = ata[0][0] * ata[1][1] - ata[0][1] * ata[1][0];
    (
        (atb[0] * ata[1][1] - atb[1] * ata[0][1]) / det,
        (ata[0][0] * atb[1] - ata[1][0] * atb[0]) / det,
    )
}

/// Least-squares extraction of the fluid coefficients (a, b) on the
/// spherical Bessel basis j_l, y_l.
pub fn extract_fluid_coeffs(mat: &MaterialParams, l: u32, fd: &FdTransmission) -> (f64, f64) {
    let kap = mat.kappa();
    let mut ata = [[0.0f64; 2]; 2];
    let mut atb = [0.0f64; 2];
    for (j, &s) in fd.r_fluid.iter().enumerate() {
        let be = bessel_eval(l, kap * s).unwrap();
        let a = [be.j, be.y];
        for ii in 0..2 {
            for jj in 0..2 {
                ata[ii][jj] += a[ii] * a[jj];
            }
            atb[ii] += a[ii] * fd.p[j];
        }
    }
    let det = ata[0][0] * ata[1][1] - ata[0][1] * ata[1][0];
    (
        (atb[0] * ata[1][1] - atb[1] * ata[0][1]) / det,
        (ata[0][0] * atb[1] - ata[1][0] * atb[0]) / det,
    )
}

/// Seven-point centered first and second derivatives, exact through
/// degree six, used by the strong-form residual oracles.
pub fn stencil_derivatives(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let v: Vec<f64> = (-3..=3).map(|k| f(x + k as f64 * h)).collect();
    let d1 = (-v[0] + 9.0 * v[1] - 45.0 * v[2] + 45.0 * v[4] - 9.0 * v[5] + v[6]) / (60.0 * h);
    let d2 = (2.0 * v[0] - 27.0 * v[1] + 270.0 * v[2] - 490.0 * v[3] + 270.0 * v[4]
        - 27.0 * v[5]
        + 2.0 * v[6])
        / (180.0 * h * h);
    (d1, d2)
}

/// Relative strong-form Navier residual of a total solid field at `r`,
/// measured against the magnitude of its constituent terms.
pub fn navier_residual(
    mat: &MaterialParams,
    l: u32,
    forcing: &ManufacturedForcing,
    radial: &dyn Fn(f64) -> f64,
    tangential: &dyn Fn(f64) -> f64,
    r: f64,
    h: f64,
) -> f64 {
    let ll = (l * (l + 1)) as f64;
    let lam2mu = mat.lambda + 2.0 * mat.mu;
    let om2rho = mat.omega * mat.omega * mat.rho_s;
    let (fd1, fd2) = stencil_derivatives(radial, r, h);
    let f = radial(r);
    let (fr, ft) = forcing.body_force(r);

    let (g, gd1, gd2) = if l == 0 {
        (0.0, 0.0, 0.0)
    } else {
        let (d1, d2) = stencil_derivatives(tangential, r, h);
        (tangential(r), d1, d2)
    };

    let dprime = fd2 + 2.0 * fd1 / r - 2.0 * f / (r * r) - ll * gd1 / r + ll * g / (r * r);
    let c_over_r = gd1 / r + (g - f) / (r * r);
    let t_r = [lam2mu * dprime, mat.mu * ll * c_over_r, om2rho * f, -fr];
    let res_r = t_r.iter().sum::<f64>().abs();
    let scale_r = t_r.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let mut worst = res_r / scale_r;

    if l > 0 {
        let d = fd1 + 2.0 * f / r - ll * g / r;
        let t_t = [
            lam2mu * d / r,
            mat.mu * (gd2 + 2.0 * gd1 / r - fd1 / r),
            om2rho * g,
            -ft,
        ];
        let res_t = t_t.iter().sum::<f64>().abs();
        let scale_t = t_t.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        worst = worst.max(res_t / scale_t);
    }
    worst
}

/// Relative strong-form Helmholtz residual of a fluid pressure field.
pub fn helmholtz_residual(
    mat: &MaterialParams,
    l: u32,
    pressure: &dyn Fn(f64) -> f64,
    r: f64,
    h: f64,
) -> f64 {
    let ll = (l * (l + 1)) as f64;
    let kap = mat.kappa();
    let (pd1, pd2) = stencil_derivatives(pressure, r, h);
    let p = pressure(r);
    let terms = [pd2, 2.0 * pd1 / r, (kap * kap - ll / (r * r)) * p];
    let res = terms.iter().sum::<f64>().abs();
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        0.0
    } else {
        res / scale
    }
}

/// Deterministic xorshift generator so test draws never depend on crate
/// versions or platform RNG state.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn banded_solver_matches_dense_elimination() {
        let n = 37;
        let (kl, ku) = (3, 2);
        let mut rng = TestRng::new(0x5eed);
        let mut dense = vec![0.0f64; n * n];
        let mut band = BandMatrix::new(n, kl, ku);
        for i in 0..n {
            for j in 0..n {
                if j + kl >= i && i + ku >= j {
                    let v = rng.uniform(-1.0, 1.0) + if i == j { 4.0 } else { 0.0 };
                    dense[i * n + j] = v;
                    band.set(i, j, v);
                }
            }
        }
        let x_true: Vec<f64> = (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let rhs: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| dense[i * n + j] * x_true[j]).sum())
            .collect();
        let x = band.solve(rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-10, "banded solve drifted: {a} vs {b}");
        }
    }
}
