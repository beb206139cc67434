//! Tiny dense linear solves for the per-mode coupling systems.
//!
//! Every assembled system here is at most 4x4, so an LU factorization with
//! partial pivoting plus an explicitly inverted factor for the infinity-norm
//! condition number costs nothing and keeps the diagnostics exact. One step
//! of iterative refinement trims the residual of the ill-conditioned
//! thin-layer systems toward machine scale.

/// Exactly singular pivot encountered during elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Singular;

/// Solution of a dense system together with its condition estimate.
#[derive(Debug, Clone)]
pub(crate) struct Solved {
    pub x: Vec<f64>,
    /// Infinity-norm condition number `||A|| * ||A^-1||`.
    pub condition: f64,
}

struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl LuFactors {
    fn factor(a: &[f64], n: usize) -> Result<Self, Singular> {
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[col * n + col].abs();
            for row in col + 1..n {
                let v = lu[row * n + col].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = row;
                }
            }
            if pivot_val == 0.0 {
                return Err(Singular);
            }
            if pivot_row != col {
                for k in 0..n {
                    lu.swap(col * n + k, pivot_row * n + k);
                }
                perm.swap(col, pivot_row);
            }
            let inv_pivot = 1.0 / lu[col * n + col];
            for row in col + 1..n {
                let factor = lu[row * n + col] * inv_pivot;
                lu[row * n + col] = factor;
                for k in col + 1..n {
                    lu[row * n + k] -= factor * lu[col * n + k];
                }
            }
        }
        Ok(LuFactors { n, lu, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for row in 1..n {
            for col in 0..row {
                x[row] -= self.lu[row * n + col] * x[col];
            }
        }
        for row in (0..n).rev() {
            for col in row + 1..n {
                x[row] -= self.lu[row * n + col] * x[col];
            }
            x[row] /= self.lu[row * n + row];
        }
        x
    }
}

fn inf_norm(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|row| (0..n).map(|col| a[row * n + col].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `a x = b` (row-major `n x n`) with one refinement step.
pub(crate) fn solve_dense(a: &[f64], b: &[f64], n: usize) -> Result<Solved, Singular> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let factors = LuFactors::factor(a, n)?;
    let mut x = factors.solve(b);
    // one step of iterative refinement in working precision
    let mut residual = vec![0.0; n];
    for row in 0..n {
        let mut r = b[row];
        for col in 0..n {
            r -= a[row * n + col] * x[col];
        }
        residual[row] = r;
    }
    let correction = factors.solve(&residual);
    for (xi, ci) in x.iter_mut().zip(&correction) {
        *xi += ci;
    }
    // condition number from the explicit inverse, column by column
    let mut inv = vec![0.0; n * n];
    let mut unit = vec![0.0; n];
    for col in 0..n {
        unit[col] = 1.0;
        let column = factors.solve(&unit);
        unit[col] = 0.0;
        for row in 0..n {
            inv[row * n + col] = column[row];
        }
    }
    let condition = inf_norm(a, n) * inf_norm(&inv, n);
    if !condition.is_finite() {
        return Err(Singular);
    }
    Ok(Solved { x, condition })
}
