//! Sparse operators of the mixed interior-penalty scheme.
//!
//! With `φ_a` the test and `φ_b` the trial function:
//!
//! * `K_ab = B(φ_b, φ_a)` where
//!   `B(w, z) = Σ_K ∫ ∇w·∇z − Σ_{Γ} ∫ {∇w·n}[z] − Σ_{Γ_I} ∫ {∇z·n}[w]`,
//! * `J_ab = Σ_{Γ} ∫ α_e [φ_b][φ_a]` with `α_e = σ₀ |e|^{-i} p²`,
//! * `M_ab = ∫ φ_b φ_a`, `F_a = ∫ f φ_a`.
//!
//! The discrete problem for `(u, v)` is
//! `[[J, K], [Kᵀ, −M]] [u; v] = [F; 0]`.
//!
//! Jumps are `first − second` with the normal pointing out of `first`; on the
//! boundary both jump and average equal the one-sided trace.

use crate::fespace::{DGSpace, EdgeQuadrature, Tabulation};
use crate::mesh::{Edge, Mesh, Point};
use crate::sparse::{SparseOperator, TripletBuilder};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub sigma0: f64,
    /// Power of `|e|^{-1}` in the penalty weight.
    pub exponent: i32,
    pub degree: usize,
    /// Weight used only by the energy norms.
    pub sigma1: f64,
}

impl PenaltyConfig {
    pub fn new(sigma0: f64, exponent: i32, degree: usize, sigma1: f64) -> Result<Self> {
        let cfg = Self {
            sigma0,
            exponent,
            degree,
            sigma1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma0 must be positive, got {}", self.sigma0)));
        }
        if !(self.sigma1 > 0.0 && self.sigma1.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma1 must be positive, got {}", self.sigma1)));
        }
        if self.exponent < 1 {
            return Err(Error::InvalidConfig(format!(
                "penalty exponent must be at least 1, got {}",
                self.exponent
            )));
        }
        if !(1..=3).contains(&self.degree) {
            return Err(Error::UnsupportedDegree(self.degree));
        }
        Ok(())
    }

    /// `σ₀ |e|^{-i} p²`.
    pub fn alpha(&self, length: f64) -> f64 {
        let p = self.degree as f64;
        self.sigma0 * length.powi(-self.exponent) * p * p
    }
}

pub fn penalty_alpha(edge: &Edge, cfg: &PenaltyConfig) -> f64 {
    cfg.alpha(edge.length)
}

/// `(jump, average)` of a scalar trace on `edge`.
pub fn jump_and_average(edge: &Edge, first: f64, second: Option<f64>) -> Result<(f64, f64)> {
    match (edge.is_interior(), second) {
        (true, Some(s)) => Ok((first - s, 0.5 * (first + s))),
        (false, None) => Ok((first, first)),
        (true, None) => Err(Error::TraceArity {
            kind: "interior",
            given: 1,
        }),
        (false, Some(_)) => Err(Error::TraceArity {
            kind: "boundary",
            given: 2,
        }),
    }
}

/// Quadrature exactness used by the assembly routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyQuadrature {
    pub volume: usize,
    pub edge: usize,
}

impl AssemblyQuadrature {
    pub fn for_degree(p: usize) -> Self {
        Self {
            volume: (2 * p).max(p + 12),
            edge: 2 * p + 2,
        }
    }
}

/// Traces of every basis function of one neighbour on an edge rule.
#[derive(Debug, Clone)]
pub struct EdgeSide {
    pub element: usize,
    /// `+1` for `first`, `−1` for `second`.
    pub jump_sign: f64,
    /// `1/2` on interior edges, `1` on the boundary.
    pub average_weight: f64,
    /// `values[q][i]`.
    pub values: Vec<Vec<f64>>,
    /// Normal derivatives `∇φ_i·n_k`, indexed like `values`.
    pub normal_derivatives: Vec<Vec<f64>>,
}

/// Quadrature data for a single edge.
#[derive(Debug, Clone)]
pub struct EdgeTraces {
    pub points: Vec<Point>,
    /// Rule weights times `|e|`.
    pub weights: Vec<f64>,
    pub sides: Vec<EdgeSide>,
}

pub fn edge_traces(mesh: &Mesh, space: &DGSpace, edge_id: usize, rule: &EdgeQuadrature) -> EdgeTraces {
    let edge = &mesh.edges[edge_id];
    let [a, b] = mesh.edge_points(edge_id);
    let points: Vec<Point> = rule
        .points
        .iter()
        .map(|&t| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])])
        .collect();
    let weights = rule.weights.iter().map(|w| w * edge.length).collect();
    let n = edge.normal;
    let interior = edge.is_interior();
    let sides = edge
        .triangles()
        .enumerate()
        .map(|(s, element)| {
            let map = space.map(element);
            let mut values = Vec::with_capacity(points.len());
            let mut normal_derivatives = Vec::with_capacity(points.len());
            for &p in &points {
                let x = map.to_reference(p);
                values.push(space.basis().values(x));
                normal_derivatives.push(
                    space
                        .basis()
                        .gradients(x)
                        .into_iter()
                        .map(|g| {
                            let g = map.pullback_gradient(g);
                            g[0] * n[0] + g[1] * n[1]
                        })
                        .collect(),
                );
            }
            EdgeSide {
                element,
                jump_sign: if s == 0 { 1.0 } else { -1.0 },
                average_weight: if interior { 0.5 } else { 1.0 },
                values,
                normal_derivatives,
            }
        })
        .collect();
    EdgeTraces {
        points,
        weights,
        sides,
    }
}

/// Which edge sums enter the form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxDomain {
    /// `B`: trial flux over Γ, test flux over Γ_I.
    Nonsymmetric,
    /// `B_I`: both flux sums over Γ_I.
    InteriorOnly,
}

/// Broken Laplacian `Σ_K ∫ ∇φ_b·∇φ_a`.
pub fn assemble_stiffness(space: &DGSpace) -> Result<SparseOperator> {
    let tab = space.tabulate(AssemblyQuadrature::for_degree(space.degree()).volume)?;
    let mut builder = volume_builder(space);
    add_stiffness(space, &tab, &mut builder);
    Ok(builder.build())
}

/// `K_ab = B(φ_b, φ_a)`.
pub fn assemble_b(mesh: &Mesh, space: &DGSpace) -> Result<SparseOperator> {
    assemble_b_form(mesh, space, FluxDomain::Nonsymmetric)
}

/// Matrix of `B_I`, the form with both flux sums restricted to Γ_I.
pub fn assemble_b_interior(mesh: &Mesh, space: &DGSpace) -> Result<SparseOperator> {
    assemble_b_form(mesh, space, FluxDomain::InteriorOnly)
}

pub fn assemble_b_form(mesh: &Mesh, space: &DGSpace, domain: FluxDomain) -> Result<SparseOperator> {
    check_layout(mesh, space)?;
    let quad = AssemblyQuadrature::for_degree(space.degree());
    let tab = space.tabulate(quad.volume)?;
    let rule = EdgeQuadrature::with_exactness(quad.edge)?;
    let m = space.dofs_per_element();
    let mut builder = volume_builder(space);
    add_stiffness(space, &tab, &mut builder);
    for (e, edge) in mesh.edges.iter().enumerate() {
        let trial_flux = edge.is_interior() || domain == FluxDomain::Nonsymmetric;
        let test_flux = edge.is_interior();
        if !trial_flux && !test_flux {
            continue;
        }
        let traces = edge_traces(mesh, space, e, &rule);
        for test in &traces.sides {
            for trial in &traces.sides {
                let mut local = vec![0.0; m * m];
                for (q, &w) in traces.weights.iter().enumerate() {
                    for a in 0..m {
                        let jump_a = test.jump_sign * test.values[q][a];
                        let flux_a = test.average_weight * test.normal_derivatives[q][a];
                        for b in 0..m {
                            let mut v = 0.0;
                            if trial_flux {
                                v -= trial.average_weight * trial.normal_derivatives[q][b] * jump_a;
                            }
                            if test_flux {
                                v -= flux_a * trial.jump_sign * trial.values[q][b];
                            }
                            local[a * m + b] += w * v;
                        }
                    }
                }
                scatter(space, test.element, trial.element, &local, &mut builder);
            }
        }
    }
    Ok(builder.build())
}

/// `J_ab = Σ_{Γ} α_e ∫ [φ_b][φ_a]`.
pub fn assemble_j(mesh: &Mesh, space: &DGSpace, cfg: &PenaltyConfig) -> Result<SparseOperator> {
    cfg.validate()?;
    check_layout(mesh, space)?;
    let rule = EdgeQuadrature::with_exactness(AssemblyQuadrature::for_degree(space.degree()).edge)?;
    let m = space.dofs_per_element();
    let mut builder = TripletBuilder::with_capacity(space.total_dofs(), space.total_dofs(), mesh.edges.len() * 4 * m * m);
    for (e, edge) in mesh.edges.iter().enumerate() {
        let alpha = penalty_alpha(edge, cfg);
        let traces = edge_traces(mesh, space, e, &rule);
        for test in &traces.sides {
            for trial in &traces.sides {
                let mut local = vec![0.0; m * m];
                let sign = test.jump_sign * trial.jump_sign;
                for (q, &w) in traces.weights.iter().enumerate() {
                    let scale = alpha * w * sign;
                    for a in 0..m {
                        for b in 0..m {
                            local[a * m + b] += scale * (test.values[q][a] * trial.values[q][b]);
                        }
                    }
                }
                scatter(space, test.element, trial.element, &local, &mut builder);
            }
        }
    }
    Ok(builder.build())
}

/// Broken `L²` Gram matrix; block diagonal.
pub fn assemble_mass(mesh: &Mesh, space: &DGSpace) -> Result<SparseOperator> {
    check_layout(mesh, space)?;
    let tab = space.tabulate(AssemblyQuadrature::for_degree(space.degree()).volume)?;
    let m = space.dofs_per_element();
    let mut builder = volume_builder(space);
    for e in 0..space.n_elements() {
        let det = space.map(e).det.abs();
        let mut local = vec![0.0; m * m];
        for (q, (_, w)) in tab.rule.iter().enumerate() {
            let phi = &tab.values[q];
            for a in 0..m {
                for b in 0..m {
                    local[a * m + b] += w * det * (phi[a] * phi[b]);
                }
            }
        }
        scatter(space, e, e, &local, &mut builder);
    }
    Ok(builder.build())
}

/// `F_a = Σ_K ∫_K f φ_a`.
pub fn assemble_load(mesh: &Mesh, space: &DGSpace, f: impl Fn(Point) -> f64) -> Result<Vec<f64>> {
    check_layout(mesh, space)?;
    let tab = space.tabulate(AssemblyQuadrature::for_degree(space.degree()).volume)?;
    let mut load = vec![0.0; space.total_dofs()];
    for e in 0..space.n_elements() {
        let map = space.map(e);
        let det = map.det.abs();
        let dofs = space.element_dofs(e);
        for (q, (x, w)) in tab.rule.iter().enumerate() {
            let fw = f(map.to_physical(x)) * w * det;
            for (slot, phi) in load[dofs.clone()].iter_mut().zip(&tab.values[q]) {
                *slot += fw * phi;
            }
        }
    }
    Ok(load)
}

/// Operators of the mixed problem and the assembled saddle-point system.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub k: SparseOperator,
    pub j: SparseOperator,
    pub mass: SparseOperator,
    pub load: Vec<f64>,
    /// `[[J, K], [Kᵀ, −M]]`.
    pub operator: SparseOperator,
    /// `[F; 0]`.
    pub rhs: Vec<f64>,
}

pub fn build_block_system(k: SparseOperator, j: SparseOperator, mass: SparseOperator, load: Vec<f64>) -> Result<BlockSystem> {
    let n = load.len();
    for (context, op) in [("B-form matrix", &k), ("penalty matrix", &j), ("mass matrix", &mass)] {
        for found in [op.nrows(), op.ncols()] {
            if found != n {
                return Err(Error::DimensionMismatch {
                    context,
                    expected: n,
                    found,
                });
            }
        }
    }
    let mut builder = TripletBuilder::with_capacity(2 * n, 2 * n, j.nnz() + 2 * k.nnz() + mass.nnz());
    for (r, c, v) in j.iter() {
        builder.push(r, c, v);
    }
    for (r, c, v) in k.iter() {
        builder.push(r, n + c, v);
        builder.push(n + c, r, v);
    }
    for (r, c, v) in mass.iter() {
        builder.push(n + r, n + c, -v);
    }
    let mut rhs = load.clone();
    rhs.resize(2 * n, 0.0);
    Ok(BlockSystem {
        operator: builder.build(),
        rhs,
        k,
        j,
        mass,
        load,
    })
}

impl BlockSystem {
    /// Unknowns per field.
    pub fn field_len(&self) -> usize {
        self.load.len()
    }

    /// Splits `[u; v]`.
    pub fn split<'x>(&self, x: &'x [f64]) -> (&'x [f64], &'x [f64]) {
        x.split_at(self.field_len())
    }
}

/// Assembles every operator of the scheme for load `f`.
pub fn assemble_system(mesh: &Mesh, space: &DGSpace, cfg: &PenaltyConfig, f: impl Fn(Point) -> f64) -> Result<BlockSystem> {
    if cfg.degree != space.degree() {
        return Err(Error::InvalidConfig(format!(
            "penalty degree {} differs from space degree {}",
            cfg.degree,
            space.degree()
        )));
    }
    let k = assemble_b(mesh, space)?;
    let j = assemble_j(mesh, space, cfg)?;
    let mass = assemble_mass(mesh, space)?;
    let load = assemble_load(mesh, space, f)?;
    build_block_system(k, j, mass, load)
}

fn check_layout(mesh: &Mesh, space: &DGSpace) -> Result<()> {
    if mesh.triangles.len() != space.n_elements() {
        return Err(Error::DimensionMismatch {
            context: "space elements vs mesh triangles",
            expected: mesh.triangles.len(),
            found: space.n_elements(),
        });
    }
    Ok(())
}

fn volume_builder(space: &DGSpace) -> TripletBuilder {
    let m = space.dofs_per_element();
    let n = space.total_dofs();
    TripletBuilder::with_capacity(n, n, space.n_elements() * m * m * 3)
}

fn add_stiffness(space: &DGSpace, tab: &Tabulation, builder: &mut TripletBuilder) {
    let m = space.dofs_per_element();
    for e in 0..space.n_elements() {
        let map = space.map(e);
        let det = map.det.abs();
        let mut local = vec![0.0; m * m];
        for (q, (_, w)) in tab.rule.iter().enumerate() {
            let grads: Vec<[f64; 2]> = tab.gradients[q].iter().map(|&g| map.pullback_gradient(g)).collect();
            for a in 0..m {
                for b in 0..m {
                    local[a * m + b] += w * det * (grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1]);
                }
            }
        }
        scatter(space, e, e, &local, builder);
    }
}

/// Adds a row-major `m × m` block coupling test element `row_el` with trial
/// element `col_el`.
fn scatter(space: &DGSpace, row_el: usize, col_el: usize, local: &[f64], builder: &mut TripletBuilder) {
    let m = space.dofs_per_element();
    let (rows, cols) = (space.element_dofs(row_el), space.element_dofs(col_el));
    for (a, r) in rows.enumerate() {
        for (b, c) in cols.clone().enumerate() {
            builder.push(r, c, local[a * m + b]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn edge_of(mesh: &Mesh, interior: bool) -> &Edge {
        mesh.edges.iter().find(|e| e.is_interior() == interior).unwrap()
    }

    #[test]
    fn penalty_weights() {
        let cfg = |i| PenaltyConfig::new(1.0, i, 2, 1.0).unwrap();
        assert!((cfg(1).alpha(0.1) - 40.0).abs() < 1e-12);
        assert!((cfg(3).alpha(0.1) - 4000.0).abs() < 1e-9);
        let p1 = PenaltyConfig::new(1.0, 1, 1, 1.0).unwrap();
        assert!((p1.alpha(SQRT_2 / 10.0) - 10.0 / SQRT_2).abs() < 1e-12);
        let mesh = Mesh::uniform(10).unwrap();
        let e = edge_of(&mesh, false);
        assert!((penalty_alpha(e, &cfg(1)) - 40.0).abs() < 1e-10);
    }

    #[test]
    fn invalid_penalty_configs() {
        assert!(PenaltyConfig::new(0.0, 1, 1, 1.0).is_err());
        assert!(PenaltyConfig::new(1.0, 0, 1, 1.0).is_err());
        assert!(PenaltyConfig::new(1.0, 1, 1, -1.0).is_err());
        assert!(matches!(PenaltyConfig::new(1.0, 1, 4, 1.0), Err(Error::UnsupportedDegree(4))));
    }

    #[test]
    fn jumps_and_averages() {
        let mesh = Mesh::uniform(2).unwrap();
        let (inner, outer) = (edge_of(&mesh, true), edge_of(&mesh, false));
        assert_eq!(jump_and_average(inner, 0.7, Some(0.7)).unwrap().0, 0.0);
        assert_eq!(jump_and_average(inner, 2.0, Some(1.0)).unwrap(), (1.0, 1.5));
        assert_eq!(jump_and_average(outer, 3.0, None).unwrap(), (3.0, 3.0));
        assert!(matches!(jump_and_average(inner, 1.0, None), Err(Error::TraceArity { .. })));
        assert!(matches!(jump_and_average(outer, 1.0, Some(2.0)), Err(Error::TraceArity { .. })));
    }

    #[test]
    fn p1_mass_block_is_the_simplex_formula() {
        let mesh = Mesh::uniform(3).unwrap();
        let space = DGSpace::new(&mesh, 1).unwrap();
        let mass = assemble_mass(&mesh, &space).unwrap();
        let area = mesh.triangles[5].area;
        for (a, r) in space.element_dofs(5).enumerate() {
            for (b, c) in space.element_dofs(5).enumerate() {
                let expected = area / 12.0 * if a == b { 2.0 } else { 1.0 };
                assert!((mass.get(r, c) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mass_is_block_diagonal_with_unit_total() {
        let mesh = Mesh::uniform(4).unwrap();
        for p in 1..=3 {
            let space = DGSpace::new(&mesh, p).unwrap();
            let mass = assemble_mass(&mesh, &space).unwrap();
            let m = space.dofs_per_element();
            assert!(mass.iter().all(|(r, c, _)| r / m == c / m));
            let ones = space.interpolate(|_| 1.0);
            let total: f64 = mass.matvec(&ones).unwrap().iter().zip(&ones).map(|(a, b)| a * b).sum();
            assert!((total - 1.0).abs() < 1e-13);
            assert!(mass.max_abs_diff(&mass.transpose()) < 1e-16);
        }
    }

    #[test]
    fn load_of_zero_and_one() {
        let mesh = Mesh::uniform(3).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        assert!(assemble_load(&mesh, &space, |_| 0.0).unwrap().iter().all(|&v| v == 0.0));
        let f = assemble_load(&mesh, &space, |_| 1.0).unwrap();
        let ones = space.interpolate(|_| 1.0);
        let total: f64 = f.iter().zip(&ones).map(|(a, b)| a * b).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn constants_are_in_the_kernel_of_k() {
        let mesh = Mesh::uniform(3).unwrap();
        for p in 1..=3 {
            let space = DGSpace::new(&mesh, p).unwrap();
            let k = assemble_b(&mesh, &space).unwrap();
            let ones = space.interpolate(|_| 1.0);
            let kx = k.matvec(&ones).unwrap();
            assert!(kx.iter().all(|v| v.abs() < 1e-12), "p={p}");
        }
    }

    #[test]
    fn k_is_nonsymmetric_but_the_volume_part_is_symmetric() {
        let mesh = Mesh::uniform(2).unwrap();
        let space = DGSpace::new(&mesh, 1).unwrap();
        let k = assemble_b(&mesh, &space).unwrap();
        assert!(k.max_abs_diff(&k.transpose()) > 1e-3);
        let a = assemble_stiffness(&space).unwrap();
        assert!(a.max_abs_diff(&a.transpose()) < 1e-12);
        let ki = assemble_b_interior(&mesh, &space).unwrap();
        assert!(ki.max_abs_diff(&ki.transpose()) < 1e-12);
    }

    #[test]
    fn boundary_trial_flux_changes_k() {
        let mesh = Mesh::uniform(1).unwrap();
        let space = DGSpace::new(&mesh, 1).unwrap();
        let k = assemble_b(&mesh, &space).unwrap();
        let ki = assemble_b_interior(&mesh, &space).unwrap();
        assert!(k.max_abs_diff(&ki) > 1e-3);
    }

    #[test]
    fn penalty_is_linear_in_sigma0() {
        let mesh = Mesh::uniform(3).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let one = assemble_j(&mesh, &space, &PenaltyConfig::new(1.0, 1, 2, 1.0).unwrap()).unwrap();
        let two = assemble_j(&mesh, &space, &PenaltyConfig::new(2.0, 1, 2, 1.0).unwrap()).unwrap();
        assert!(two.max_abs_diff(&one.scaled(2.0)) <= 1e-14 * two.max_abs().max(1.0));
    }

    #[test]
    fn block_system_shape_and_dimension_checks() {
        let mesh = Mesh::uniform(2).unwrap();
        let space = DGSpace::new(&mesh, 1).unwrap();
        let cfg = PenaltyConfig::new(1.0, 1, 1, 1.0).unwrap();
        let sys = assemble_system(&mesh, &space, &cfg, |_| 0.0).unwrap();
        let n = space.total_dofs();
        assert_eq!((sys.operator.nrows(), sys.operator.ncols(), sys.rhs.len()), (2 * n, 2 * n, 2 * n));
        assert!(sys.rhs.iter().all(|&v| v == 0.0));
        let bad = build_block_system(sys.k.clone(), sys.j.clone(), sys.mass.clone(), vec![0.0; n + 1]);
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
        let wrong_degree = PenaltyConfig::new(1.0, 1, 2, 1.0).unwrap();
        assert!(assemble_system(&mesh, &space, &wrong_degree, |_| 0.0).is_err());
    }
}
