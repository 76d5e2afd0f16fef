//! Refinement studies against the manufactured solution.

use crate::analysis::{
    discrete_max, energy_error, j_seminorm, l2_error, manufactured, ConvergenceReport, EnergyVariant, LevelFailure,
    LevelRecord, NormConfig,
};
use crate::assembly::{assemble_system, BlockSystem, PenaltyConfig};
use crate::fespace::{DGSpace, MAX_TRIANGLE_EXACTNESS};
use crate::mesh::Mesh;
use crate::solver::{solve_block, SolveReport, DEFAULT_TOLERANCE};
use crate::{Error, Result};

pub const DEFAULT_MESH_SIZES: [usize; 7] = [5, 10, 15, 20, 25, 30, 35];

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub degree: usize,
    pub exponent: i32,
    pub sigma0: f64,
    pub sigma1: f64,
    /// Strictly increasing subdivision counts.
    pub mesh_sizes: Vec<usize>,
    pub tol: f64,
}

impl StudyConfig {
    pub fn new(degree: usize, exponent: i32, mesh_sizes: Vec<usize>) -> Self {
        Self {
            degree,
            exponent,
            sigma0: 1.0,
            sigma1: 1.0,
            mesh_sizes,
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn penalty(&self) -> Result<PenaltyConfig> {
        PenaltyConfig::new(self.sigma0, self.exponent, self.degree, self.sigma1)
    }

    pub fn validate(&self) -> Result<()> {
        self.penalty()?;
        if self.mesh_sizes.is_empty() {
            return Err(Error::InvalidConfig("mesh size list is empty".into()));
        }
        if self.mesh_sizes.contains(&0) {
            return Err(Error::EmptyMesh);
        }
        if self.mesh_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("mesh sizes must be strictly increasing".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("solver tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// A solved level: mesh, space, assembled system and solution `[u; v]`.
#[derive(Debug, Clone)]
pub struct Discretisation {
    pub mesh: Mesh,
    pub space: DGSpace,
    pub system: BlockSystem,
    pub solve: SolveReport,
}

impl Discretisation {
    pub fn u(&self) -> &[f64] {
        self.system.split(&self.solve.solution).0
    }

    pub fn v(&self) -> &[f64] {
        self.system.split(&self.solve.solution).1
    }
}

/// Assembles and solves the manufactured problem on the `n × n` mesh.
pub fn discretise(n: usize, penalty: &PenaltyConfig, tol: f64) -> Result<Discretisation> {
    let mesh = Mesh::uniform(n)?;
    let space = DGSpace::new(&mesh, penalty.degree)?;
    let exact = manufactured();
    let system = assemble_system(&mesh, &space, penalty, |p| exact.f(p))?;
    let solve = solve_block(&system, tol)?;
    Ok(Discretisation {
        mesh,
        space,
        system,
        solve,
    })
}

/// Error columns of a solved level.
pub fn evaluate(d: &Discretisation, penalty: &PenaltyConfig) -> Result<LevelRecord> {
    let exact = manufactured();
    let norms = NormConfig::with_sigma1(penalty.sigma1)?;
    let (u, v) = (d.u(), d.v());
    Ok(LevelRecord {
        n: d.mesh.n,
        h: d.mesh.h,
        l2_u: l2_error(&d.space, u, |p| exact.u(p), &norms)?,
        energy_u: energy_error(
            &d.mesh,
            &d.space,
            u,
            |p| exact.u(p),
            |p| exact.grad_u(p),
            &norms,
            EnergyVariant::Full,
        )?,
        l2_v: l2_error(&d.space, v, |p| exact.v(p), &norms)?,
        j_semi: j_seminorm(&d.mesh, &d.space, u, |p| exact.u(p), penalty, &norms)?,
        max_uh: discrete_max(&d.space, u, MAX_TRIANGLE_EXACTNESS)?,
        residual: d.solve.residual,
        solve_seconds: d.solve.elapsed.as_secs_f64(),
    })
}

pub fn run_level(n: usize, penalty: &PenaltyConfig, tol: f64) -> Result<LevelRecord> {
    evaluate(&discretise(n, penalty, tol)?, penalty)
}

/// Runs every level of `cfg`. A failing level is recorded and the remaining
/// levels still run.
pub fn run_study(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let penalty = cfg.penalty()?;
    let mut report = ConvergenceReport {
        degree: cfg.degree,
        exponent: cfg.exponent,
        sigma0: cfg.sigma0,
        sigma1: cfg.sigma1,
        levels: Vec::with_capacity(cfg.mesh_sizes.len()),
        failures: Vec::new(),
    };
    for &n in &cfg.mesh_sizes {
        match run_level(n, &penalty, cfg.tol) {
            Ok(level) => report.levels.push(level),
            Err(err) => report.failures.push(LevelFailure {
                n,
                message: err.to_string(),
            }),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(StudyConfig::new(1, 1, vec![]).validate().is_err());
        assert!(StudyConfig::new(1, 1, vec![4, 4]).validate().is_err());
        assert!(StudyConfig::new(1, 1, vec![0, 2]).validate().is_err());
        assert!(StudyConfig::new(4, 1, vec![2]).validate().is_err());
        assert!(StudyConfig::new(2, 3, vec![2, 4]).validate().is_ok());
        assert!(run_study(&StudyConfig::new(1, 1, vec![])).is_err());
    }

    #[test]
    fn small_study_is_ordered_and_converging() {
        let report = run_study(&StudyConfig::new(2, 1, vec![4, 8])).unwrap();
        assert!(report.is_complete());
        assert_eq!(report.levels.iter().map(|l| l.n).collect::<Vec<_>>(), vec![4, 8]);
        assert!(report.levels[1].l2_u < report.levels[0].l2_u);
        assert!(report.levels.iter().all(|l| l.residual <= 1e-10));
    }
}
