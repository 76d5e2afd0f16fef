//! Direct solution of the assembled systems.
//!
//! General operators are factored with a banded LU. For the mixed block
//! system the mass matrix is block diagonal, so `v = M⁻¹Kᵀu` is eliminated
//! exactly and only the Schur complement `S = J + K M⁻¹ Kᵀ` is factored.
//! Both paths finish with iterative refinement against the original
//! operator, and the reported residual is always recomputed from the
//! returned solution.

mod banded;

pub use banded::BandedLu;

use std::time::{Duration, Instant};

use nalgebra::DMatrix;

use crate::assembly::BlockSystem;
use crate::sparse::{SparseOperator, TripletBuilder};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const MAX_REFINEMENT_STEPS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    BandedLu,
    SchurBandedLu,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// `‖Ax − b‖₂ / ‖b‖₂`, or the absolute residual when `b = 0`.
    pub residual: f64,
    pub method: SolveMethod,
    pub refinement_steps: usize,
    pub elapsed: Duration,
}

/// Relative residual, absolute when `‖b‖ = 0`.
pub fn relative_residual(a: &SparseOperator, x: &[f64], b: &[f64]) -> Result<f64> {
    let ax = a.matvec(x)?;
    let r = ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let nb = norm2(b);
    Ok(if nb > 0.0 { r / nb } else { r })
}

/// Solves a general square system.
pub fn solve(a: &SparseOperator, b: &[f64], tol: f64) -> Result<SolveReport> {
    check_inputs(a, b, tol)?;
    let start = Instant::now();
    let lu = BandedLu::factor(a)?;
    let mut x = lu.solve(b);
    let (residual, steps) = refine(a, b, &mut x, tol, |r| lu.solve(r))?;
    finish(x, residual, tol, SolveMethod::BandedLu, steps, start)
}

/// Solves `[[J, K], [Kᵀ, −M]] [u; v] = [F; 0]`.
pub fn solve_block(system: &BlockSystem, tol: f64) -> Result<SolveReport> {
    check_inputs(&system.operator, &system.rhs, tol)?;
    let start = Instant::now();
    let n = system.field_len();
    let mass_inverse = BlockDiagonalInverse::new(&system.mass)?;
    // W = M⁻¹Kᵀ shares the pattern of Kᵀ.
    let w = mass_inverse.apply_left(&system.k.transpose());
    let schur = add(&system.j, &multiply(&system.k, &w));
    let lu = BandedLu::factor(&schur)?;

    // With r = [r_u; r_v]: S du = r_u + K M⁻¹ r_v and dv = W du − M⁻¹ r_v.
    let reduced = |r: &[f64]| -> Vec<f64> {
        let (ru, rv) = r.split_at(n);
        let minv_rv = mass_inverse.apply(rv);
        let k_minv_rv = system.k.matvec(&minv_rv).expect("conforming");
        let rhs: Vec<f64> = ru.iter().zip(&k_minv_rv).map(|(a, b)| a + b).collect();
        let du = lu.solve(&rhs);
        let wdu = w.matvec(&du).expect("conforming");
        let mut out = du;
        out.extend(wdu.iter().zip(&minv_rv).map(|(a, b)| a - b));
        out
    };
    let mut x = reduced(&system.rhs);
    let (residual, steps) = refine(&system.operator, &system.rhs, &mut x, tol, reduced)?;
    finish(x, residual, tol, SolveMethod::SchurBandedLu, steps, start)
}

fn check_inputs(a: &SparseOperator, b: &[f64], tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            context: "solve (square operator)",
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            context: "solve (right-hand side)",
            expected: a.nrows(),
            found: b.len(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("solver tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Refines `x` until the residual stops improving or drops well below `tol`.
fn refine(
    a: &SparseOperator,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    correction: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<(f64, usize)> {
    let mut residual = relative_residual(a, x, b)?;
    let mut steps = 0;
    while steps < MAX_REFINEMENT_STEPS && residual > 1e-3 * tol {
        let ax = a.matvec(x)?;
        let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let dx = correction(&r);
        let candidate: Vec<f64> = x.iter().zip(&dx).map(|(p, q)| p + q).collect();
        let next = relative_residual(a, &candidate, b)?;
        steps += 1;
        if !(next < residual) {
            break;
        }
        x.copy_from_slice(&candidate);
        residual = next;
    }
    Ok((residual, steps))
}

fn finish(
    solution: Vec<f64>,
    residual: f64,
    tol: f64,
    method: SolveMethod,
    refinement_steps: usize,
    start: Instant,
) -> Result<SolveReport> {
    if !(residual <= tol) {
        return Err(Error::ResidualTooLarge { achieved: residual, tol });
    }
    Ok(SolveReport {
        solution,
        residual,
        method,
        refinement_steps,
        elapsed: start.elapsed(),
    })
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Inverse of a block-diagonal matrix whose blocks are contiguous and of
/// equal size.
struct BlockDiagonalInverse {
    block: usize,
    inverses: Vec<DMatrix<f64>>,
}

impl BlockDiagonalInverse {
    fn new(mass: &SparseOperator) -> Result<Self> {
        let n = mass.nrows();
        // Block size: the extent of the first row's coupling.
        let block = mass.row(0).map(|(c, _)| c + 1).max().unwrap_or(1);
        if n % block != 0 || mass.iter().any(|(r, c, _)| r / block != c / block) {
            return Err(Error::InvalidConfig("mass matrix is not block diagonal".into()));
        }
        let inverses = (0..n / block)
            .map(|e| {
                let base = e * block;
                let local = DMatrix::from_fn(block, block, |i, j| mass.get(base + i, base + j));
                local
                    .cholesky()
                    .map(|c| c.inverse())
                    .ok_or(Error::Singular { pivot: base })
            })
            .collect::<Result<_>>()?;
        Ok(Self { block, inverses })
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (e, inv) in self.inverses.iter().enumerate() {
            let base = e * self.block;
            for i in 0..self.block {
                out[base + i] = (0..self.block).map(|j| inv[(i, j)] * x[base + j]).sum();
            }
        }
        out
    }

    /// `M⁻¹ A` for sparse `A`.
    fn apply_left(&self, a: &SparseOperator) -> SparseOperator {
        let mut builder = TripletBuilder::with_capacity(a.nrows(), a.ncols(), a.nnz() * self.block);
        for (e, inv) in self.inverses.iter().enumerate() {
            let base = e * self.block;
            for j in 0..self.block {
                for (c, v) in a.row(base + j) {
                    for i in 0..self.block {
                        builder.push(base + i, c, inv[(i, j)] * v);
                    }
                }
            }
        }
        builder.build()
    }
}

/// Sparse product (row-wise Gustavson).
fn multiply(a: &SparseOperator, b: &SparseOperator) -> SparseOperator {
    assert_eq!(a.ncols(), b.nrows());
    let mut builder = TripletBuilder::new(a.nrows(), b.ncols());
    let mut acc = vec![0.0; b.ncols()];
    let mut touched = vec![false; b.ncols()];
    let mut pattern = Vec::new();
    for r in 0..a.nrows() {
        for (k, av) in a.row(r) {
            for (c, bv) in b.row(k) {
                if !touched[c] {
                    touched[c] = true;
                    pattern.push(c);
                }
                acc[c] += av * bv;
            }
        }
        for &c in &pattern {
            builder.push(r, c, acc[c]);
            acc[c] = 0.0;
            touched[c] = false;
        }
        pattern.clear();
    }
    builder.build()
}

fn add(a: &SparseOperator, b: &SparseOperator) -> SparseOperator {
    let mut builder = TripletBuilder::with_capacity(a.nrows(), a.ncols(), a.nnz() + b.nnz());
    for (r, c, v) in a.iter().chain(b.iter()) {
        builder.push(r, c, v);
    }
    builder.build()
}
