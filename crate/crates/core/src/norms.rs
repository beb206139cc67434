//! Modal norms by radial quadrature.
//!
//! At fixed degree `l` every Sobolev norm on the ball or the layer reduces
//! to a one-dimensional radial integral, and any two choices of the angular
//! normalization are equivalent. The norms here are H1-equivalent in that
//! sense: convergence *orders* measured in them are the orders in the full
//! norms, while constants are only defined up to the equivalence.
//!
//! The fluid layer norm carries the `sqrt(eps)` weight of the thin-layer
//! remainder estimates; [`fluid_error_norm_unweighted`] exists so tests can
//! confirm that dropping the weight costs exactly half an order.

use crate::elastic::{ManufacturedForcing, ModalSolidField};
use crate::error::Error;
use crate::fluid::ModalFluidField;
use crate::quadrature::{gauss_legendre, trapezoid};
use crate::solver::ExpansionSet;

/// Which norm a value was measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// H1-equivalent norm of a solid modal field on the ball.
    SolidH1,
    /// `sqrt(eps)`-weighted H1-equivalent norm on the fluid layer.
    FluidH1Scaled,
    /// L2 norm of a trace on the interface sphere.
    TraceL2,
}

/// A nonnegative norm value tagged with its kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalNorm {
    kind: NormKind,
    value: f64,
}

impl ModalNorm {
    /// Norm kind.
    pub fn kind(&self) -> NormKind {
        self.kind
    }

    /// Norm value.
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Radial quadrature rule used for the norm integrals.
///
/// Gauss-Legendre at 64 nodes is the production choice; the trapezoid rule
/// exists to demonstrate that measured convergence orders do not depend on
/// the quadrature (the node counts differ by an order of magnitude for the
/// same accuracy class).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormRule {
    /// Gauss-Legendre with the given node count.
    GaussLegendre(usize),
    /// Composite trapezoid with the given panel count.
    Trapezoid(usize),
}

impl Default for NormRule {
    fn default() -> Self {
        NormRule::GaussLegendre(64)
    }
}

impl NormRule {
    fn nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        match *self {
            NormRule::GaussLegendre(n) => {
                assert!(n >= 1, "quadrature needs at least one node");
                gauss_legendre(n, a, b)
            }
            NormRule::Trapezoid(n) => {
                assert!(n >= 1, "quadrature needs at least one panel");
                trapezoid(n, a, b)
            }
        }
    }
}

// (f, f', g, g') integrated as [f^2 + f'^2 + l(l+1)(g^2 + g'^2)] r^2 dr
fn ball_norm(
    rule: &NormRule,
    radius: f64,
    degree: u32,
    sample: impl Fn(f64) -> (f64, f64, f64, f64),
) -> f64 {
    let ll = (degree * (degree + 1)) as f64;
    let mut sum = 0.0;
    for (r, w) in rule.nodes(0.0, radius) {
        if r <= 0.0 {
            // the integrand vanishes like r^2 at the origin
            continue;
        }
        let (f, f_d, g, g_d) = sample(r);
        sum += w * (f * f + f_d * f_d + ll * (g * g + g_d * g_d)) * r * r;
    }
    sum.max(0.0).sqrt()
}

// (p, p') integrated as [p^2 (1 + l(l+1)/r^2) + p'^2] r^2 dr
fn shell_norm(
    rule: &NormRule,
    r_inner: f64,
    r_outer: f64,
    degree: u32,
    sample: impl Fn(f64) -> (f64, f64),
) -> f64 {
    let ll = (degree * (degree + 1)) as f64;
    let mut sum = 0.0;
    for (r, w) in rule.nodes(r_inner, r_outer) {
        let (p, p_d) = sample(r);
        sum += w * (p * p * (1.0 + ll / (r * r)) + p_d * p_d) * r * r;
    }
    sum.max(0.0).sqrt()
}

/// H1-equivalent norm of the difference of two same-mode solid fields over
/// the ball of the given radius.
pub fn solid_error_norm(
    a: &ModalSolidField,
    b: &ModalSolidField,
    radius: f64,
    rule: &NormRule,
) -> Result<ModalNorm, Error> {
    check_radius(radius)?;
    let diff = ModalSolidField::superpose(&[(1.0, a), (-1.0, b)])?;
    let value = ball_norm(rule, radius, diff.degree(), |r| {
        let s = diff.sample(r);
        (s.f, s.f_d, s.g, s.g_d)
    });
    Ok(ModalNorm {
        kind: NormKind::SolidH1,
        value,
    })
}

/// H1-equivalent norm of a total solid solution, particular field included.
pub fn solid_total_norm(
    field: &ModalSolidField,
    forcing: &ManufacturedForcing,
    rule: &NormRule,
) -> Result<ModalNorm, Error> {
    if field.degree() != forcing.degree() {
        return Err(Error::ModeMismatch(format!(
            "field is on degree {}, forcing on degree {}",
            field.degree(),
            forcing.degree()
        )));
    }
    let value = ball_norm(rule, forcing.radius(), field.degree(), |r| {
        let s = field.sample(r);
        (
            s.f + forcing.up_radial(r),
            s.f_d + forcing.up_radial_d(r),
            s.g,
            s.g_d,
        )
    });
    Ok(ModalNorm {
        kind: NormKind::SolidH1,
        value,
    })
}

/// `sqrt(eps)`-weighted H1-equivalent norm of the order-`n` fluid remainder
/// `p - sum_{j<=n} eps^j p_j((r - R)/eps)` over the layer `[R, R + eps]`.
pub fn fluid_error_norm(
    exact: &ModalFluidField,
    expansion: &ExpansionSet,
    eps: f64,
    n: usize,
    rule: &NormRule,
) -> Result<ModalNorm, Error> {
    let raw = fluid_error_norm_unweighted(exact, expansion, eps, n, rule)?;
    Ok(ModalNorm {
        kind: NormKind::FluidH1Scaled,
        value: eps.sqrt() * raw.value,
    })
}

/// The fluid remainder norm without its `sqrt(eps)` weight.
pub fn fluid_error_norm_unweighted(
    exact: &ModalFluidField,
    expansion: &ExpansionSet,
    eps: f64,
    n: usize,
    rule: &NormRule,
) -> Result<ModalNorm, Error> {
    if exact.degree() != expansion.degree() {
        return Err(Error::ModeMismatch(format!(
            "fluid field is on degree {}, expansion on degree {}",
            exact.degree(),
            expansion.degree()
        )));
    }
    if exact.material() != expansion.material() {
        return Err(Error::ModeMismatch(
            "fluid field and expansion use different material parameters".into(),
        ));
    }
    // validates eps and the available order before any evaluation
    expansion.pressure_partial(eps, n, expansion.radius())?;
    let radius = expansion.radius();
    let value = shell_norm(rule, radius, radius + eps, exact.degree(), |r| {
        let p = exact.pressure(r)
            - expansion
                .pressure_partial(eps, n, r)
                .expect("validated above");
        let p_d = exact.pressure_d(r)
            - expansion
                .pressure_partial_d(eps, n, r)
                .expect("validated above");
        (p, p_d)
    });
    Ok(ModalNorm {
        kind: NormKind::FluidH1Scaled,
        value,
    })
}

/// `sqrt(eps)`-weighted H1-equivalent norm of a fluid field itself over the
/// layer; the boundedness checks measure total solutions with this.
pub fn fluid_total_norm(
    field: &ModalFluidField,
    radius: f64,
    eps: f64,
    rule: &NormRule,
) -> Result<ModalNorm, Error> {
    check_radius(radius)?;
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::Domain(format!(
            "layer norm needs eps > 0, got {eps}"
        )));
    }
    let value = shell_norm(rule, radius, radius + eps, field.degree(), |r| {
        (field.pressure(r), field.pressure_d(r))
    });
    Ok(ModalNorm {
        kind: NormKind::FluidH1Scaled,
        value: eps.sqrt() * value,
    })
}

/// L2 norm of a modal trace on the interface sphere of the given radius.
pub fn trace_l2(value_at_interface: f64, radius: f64) -> Result<ModalNorm, Error> {
    check_radius(radius)?;
    Ok(ModalNorm {
        kind: NormKind::TraceL2,
        value: value_at_interface.abs() * radius,
    })
}

fn check_radius(radius: f64) -> Result<(), Error> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Domain(format!(
            "norm needs a positive radius, got {radius}"
        )));
    }
    Ok(())
}
