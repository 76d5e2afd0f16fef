//! Error functionals between an exact field and a discrete one.
//!
//! The exact field is continuous, so on interior edges the jump of the error
//! is minus the jump of the discrete field; on boundary edges it is the
//! one-sided difference of traces.

use crate::assembly::{edge_traces, EdgeTraces, PenaltyConfig};
use crate::fespace::{DGSpace, EdgeQuadrature, MAX_TRIANGLE_EXACTNESS};
use crate::mesh::{Mesh, Point};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConfig {
    pub sigma1: f64,
    /// Exactness of the triangle rule used for error integrals.
    pub exactness: usize,
    /// Exactness of the edge rule used for error integrals.
    pub edge_exactness: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            sigma1: 1.0,
            exactness: MAX_TRIANGLE_EXACTNESS,
            edge_exactness: 33,
        }
    }
}

impl NormConfig {
    pub fn with_sigma1(sigma1: f64) -> Result<Self> {
        if !(sigma1 > 0.0 && sigma1.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma1 must be positive, got {sigma1}")));
        }
        Ok(Self {
            sigma1,
            ..Self::default()
        })
    }
}

/// Which edges carry the jump term of the energy norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyVariant {
    /// `|||·|||`: jumps over Γ.
    Full,
    /// `|||·|||_I`: jumps over Γ_I.
    Interior,
}

/// σ₁-independent pieces of the squared energy norm:
/// `|||w|||² = volume + average / σ₁ + σ₁ · jump`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyParts {
    /// `Σ_K ∫ |∇w|²`.
    pub volume: f64,
    /// `Σ_Γ |e| ∫ {∂w/∂n}²`.
    pub average: f64,
    /// `Σ_{Γ_I} |e|⁻¹ ∫ [w]²`.
    pub interior_jump: f64,
    /// `Σ_{Γ_D} |e|⁻¹ ∫ [w]²`.
    pub boundary_jump: f64,
}

impl EnergyParts {
    pub fn norm(&self, sigma1: f64, variant: EnergyVariant) -> f64 {
        let jump = match variant {
            EnergyVariant::Full => self.interior_jump + self.boundary_jump,
            EnergyVariant::Interior => self.interior_jump,
        };
        (self.volume + self.average / sigma1 + sigma1 * jump).sqrt()
    }
}

/// `‖exact − w_h‖_{L²(Ω)}`.
pub fn l2_error(space: &DGSpace, coefficients: &[f64], exact: impl Fn(Point) -> f64, cfg: &NormConfig) -> Result<f64> {
    check_len(space, coefficients)?;
    let tab = space.tabulate(cfg.exactness)?;
    let mut total = 0.0;
    for e in 0..space.n_elements() {
        let map = space.map(e);
        let local = &coefficients[space.element_dofs(e)];
        let mut sum = 0.0;
        for (q, (x, w)) in tab.rule.iter().enumerate() {
            let uh: f64 = tab.values[q].iter().zip(local).map(|(a, b)| a * b).sum();
            let d = exact(map.to_physical(x)) - uh;
            sum += w * d * d;
        }
        total += sum * map.det.abs();
    }
    Ok(total.sqrt())
}

/// Accumulates the pieces of `|||exact − w_h|||²`.
pub fn energy_parts(
    mesh: &Mesh,
    space: &DGSpace,
    coefficients: &[f64],
    exact: impl Fn(Point) -> f64,
    exact_gradient: impl Fn(Point) -> [f64; 2],
    cfg: &NormConfig,
) -> Result<EnergyParts> {
    check_len(space, coefficients)?;
    let tab = space.tabulate(cfg.exactness)?;
    let mut parts = EnergyParts::default();
    for e in 0..space.n_elements() {
        let map = space.map(e);
        let local = &coefficients[space.element_dofs(e)];
        let mut sum = 0.0;
        for (q, (x, w)) in tab.rule.iter().enumerate() {
            let g = tab.gradients[q]
                .iter()
                .zip(local)
                .fold([0.0, 0.0], |acc, (g, c)| [acc[0] + c * g[0], acc[1] + c * g[1]]);
            let gh = map.pullback_gradient(g);
            let ge = exact_gradient(map.to_physical(x));
            sum += w * ((ge[0] - gh[0]).powi(2) + (ge[1] - gh[1]).powi(2));
        }
        parts.volume += sum * map.det.abs();
    }

    let rule = EdgeQuadrature::with_exactness(cfg.edge_exactness)?;
    for (id, edge) in mesh.edges.iter().enumerate() {
        let traces = edge_traces(mesh, space, id, &rule);
        let n = edge.normal;
        let (mut avg_sum, mut jump_sum) = (0.0, 0.0);
        for (q, (&p, &w)) in traces.points.iter().zip(&traces.weights).enumerate() {
            let ge = exact_gradient(p);
            let exact_flux = ge[0] * n[0] + ge[1] * n[1];
            let (jump, flux) = error_jump_and_flux(&traces, q, coefficients, space, exact(p), exact_flux);
            avg_sum += w * flux * flux;
            jump_sum += w * jump * jump;
        }
        parts.average += edge.length * avg_sum;
        if edge.is_interior() {
            parts.interior_jump += jump_sum / edge.length;
        } else {
            parts.boundary_jump += jump_sum / edge.length;
        }
    }
    Ok(parts)
}

/// `|||exact − w_h|||` or `|||exact − w_h|||_I`.
pub fn energy_error(
    mesh: &Mesh,
    space: &DGSpace,
    coefficients: &[f64],
    exact: impl Fn(Point) -> f64,
    exact_gradient: impl Fn(Point) -> [f64; 2],
    cfg: &NormConfig,
    variant: EnergyVariant,
) -> Result<f64> {
    let parts = energy_parts(mesh, space, coefficients, exact, exact_gradient, cfg)?;
    Ok(parts.norm(cfg.sigma1, variant))
}

/// `J(exact − w_h, exact − w_h)^{1/2}` with the penalty weights of `penalty`.
pub fn j_seminorm(
    mesh: &Mesh,
    space: &DGSpace,
    coefficients: &[f64],
    exact: impl Fn(Point) -> f64,
    penalty: &PenaltyConfig,
    cfg: &NormConfig,
) -> Result<f64> {
    check_len(space, coefficients)?;
    penalty.validate()?;
    let rule = EdgeQuadrature::with_exactness(cfg.edge_exactness)?;
    let mut total = 0.0;
    for (id, edge) in mesh.edges.iter().enumerate() {
        let traces = edge_traces(mesh, space, id, &rule);
        let mut sum = 0.0;
        for (q, (&p, &w)) in traces.points.iter().zip(&traces.weights).enumerate() {
            let (jump, _) = error_jump_and_flux(&traces, q, coefficients, space, exact(p), 0.0);
            sum += w * jump * jump;
        }
        total += penalty.alpha(edge.length) * sum;
    }
    Ok(total.sqrt())
}

/// Maximum of the discrete field over the nodes and the points of a
/// triangle rule of the given exactness on every element.
pub fn discrete_max(space: &DGSpace, coefficients: &[f64], exactness: usize) -> Result<f64> {
    check_len(space, coefficients)?;
    let tab = space.tabulate(exactness)?;
    let nodal = coefficients.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best = nodal;
    for e in 0..space.n_elements() {
        let local = &coefficients[space.element_dofs(e)];
        for values in &tab.values {
            let v: f64 = values.iter().zip(local).map(|(a, b)| a * b).sum();
            best = best.max(v);
        }
    }
    Ok(best)
}

/// Error jump and error flux average at point `q` of an edge.
fn error_jump_and_flux(
    traces: &EdgeTraces,
    q: usize,
    coefficients: &[f64],
    space: &DGSpace,
    exact_value: f64,
    exact_flux: f64,
) -> (f64, f64) {
    let (mut jump, mut flux) = (0.0, 0.0);
    for side in &traces.sides {
        let local = &coefficients[space.element_dofs(side.element)];
        let value: f64 = side.values[q].iter().zip(local).map(|(a, b)| a * b).sum();
        let dn: f64 = side.normal_derivatives[q].iter().zip(local).map(|(a, b)| a * b).sum();
        jump += side.jump_sign * (exact_value - value);
        flux += side.average_weight * (exact_flux - dn);
    }
    (jump, flux)
}

fn check_len(space: &DGSpace, coefficients: &[f64]) -> Result<()> {
    if coefficients.len() != space.total_dofs() {
        return Err(Error::DimensionMismatch {
            context: "coefficient vector",
            expected: space.total_dofs(),
            found: coefficients.len(),
        });
    }
    Ok(())
}
