use nalgebra::DMatrix;

use crate::{Error, Result};

/// Nodal Lagrange basis of `P_p` on the reference triangle, built from the
/// inverse Vandermonde matrix of the monomials `x̂^a ŷ^b`, `a + b ≤ p`.
#[derive(Debug, Clone)]
pub struct ReferenceBasis {
    degree: usize,
    nodes: Vec<[f64; 2]>,
    exponents: Vec<(i32, i32)>,
    /// `coefficients[(k, i)]` multiplies monomial `k` in basis function `i`.
    coefficients: DMatrix<f64>,
}

pub fn dimension(p: usize) -> usize {
    (p + 1) * (p + 2) / 2
}

impl ReferenceBasis {
    pub fn new(p: usize) -> Result<Self> {
        if !(1..=3).contains(&p) {
            return Err(Error::UnsupportedDegree(p));
        }
        let m = dimension(p);
        let mut nodes = Vec::with_capacity(m);
        for j in 0..=p {
            for i in 0..=p - j {
                nodes.push([i as f64 / p as f64, j as f64 / p as f64]);
            }
        }
        let mut exponents = Vec::with_capacity(m);
        for total in 0..=p as i32 {
            for b in 0..=total {
                exponents.push((total - b, b));
            }
        }
        let vandermonde = DMatrix::from_fn(m, m, |j, k| {
            let (a, b) = exponents[k];
            nodes[j][0].powi(a) * nodes[j][1].powi(b)
        });
        let coefficients = vandermonde
            .try_inverse()
            .expect("uniform nodes are unisolvent for P_p");
        Ok(Self {
            degree: p,
            nodes,
            exponents,
            coefficients,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn values(&self, x: [f64; 2]) -> Vec<f64> {
        let mono: Vec<f64> = self
            .exponents
            .iter()
            .map(|&(a, b)| x[0].powi(a) * x[1].powi(b))
            .collect();
        (0..self.len())
            .map(|i| mono.iter().enumerate().map(|(k, m)| m * self.coefficients[(k, i)]).sum())
            .collect()
    }

    /// Reference gradients `∇̂φ_i(x̂)`.
    pub fn gradients(&self, x: [f64; 2]) -> Vec<[f64; 2]> {
        let dmono: Vec<[f64; 2]> = self
            .exponents
            .iter()
            .map(|&(a, b)| {
                let dx = if a > 0 { a as f64 * x[0].powi(a - 1) * x[1].powi(b) } else { 0.0 };
                let dy = if b > 0 { b as f64 * x[0].powi(a) * x[1].powi(b - 1) } else { 0.0 };
                [dx, dy]
            })
            .collect();
        (0..self.len())
            .map(|i| {
                dmono.iter().enumerate().fold([0.0, 0.0], |acc, (k, d)| {
                    let c = self.coefficients[(k, i)];
                    [acc[0] + c * d[0], acc[1] + c * d[1]]
                })
            })
            .collect()
    }
}
