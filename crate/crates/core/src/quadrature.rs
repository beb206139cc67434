//! Radial quadrature rules used by the norm computations.
//!
//! Gauss-Legendre nodes and weights are generated on demand by Newton
//! iteration on the Legendre recurrence; a uniform trapezoid rule is kept
//! alongside as a deliberately different discretization for robustness
//! checks of fitted convergence rates.

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[a, b]`.
///
/// Panics if `n == 0` or the interval is degenerate; callers pass fixed
/// interior intervals.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(n > 0, "quadrature rule needs at least one node");
    assert!(b > a, "quadrature interval must have positive length");
    let mut nodes = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for k in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            pp = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[k] = (-x, w);
        nodes[n - 1 - k] = (x, w);
    }
    // map [-1, 1] -> [a, b]
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .into_iter()
        .map(|(x, w)| (mid + half * x, half * w))
        .collect()
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0_f64;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the composite trapezoid rule with `n >= 2` nodes.
pub fn trapezoid(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(n >= 2, "trapezoid rule needs at least two nodes");
    assert!(b > a, "quadrature interval must have positive length");
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
            (a + i as f64 * h, w)
        })
        .collect()
}

/// Applies a rule to an integrand.
pub fn integrate(rule: &[(f64, f64)], mut f: impl FnMut(f64) -> f64) -> f64 {
    rule.iter().map(|&(x, w)| w * f(x)).sum()
}
