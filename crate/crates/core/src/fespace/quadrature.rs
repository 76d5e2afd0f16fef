//! Gauss rules on `[0, 1]` and collapsed-product rules on the reference
//! triangle `{x̂, ŷ ≥ 0, x̂ + ŷ ≤ 1}`.
//!
//! Triangle rules use the Duffy map `(s, t) ↦ (s, t(1 − s))` with Jacobian
//! `1 − s`, so a monomial `x̂^a ŷ^b` becomes `s^a (1 − s)^{b+1} t^b` on the
//! unit square and a tensor Gauss rule with `⌈(d + 2)/2⌉` points per direction
//! is exact up to total degree `d`.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Highest exactness offered on triangles.
pub const MAX_TRIANGLE_EXACTNESS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleQuadrature {
    /// Reference coordinates `(x̂, ŷ)`.
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeQuadrature {
    /// Parameters in `[0, 1]`.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

impl TriangleQuadrature {
    pub fn with_exactness(d: usize) -> Result<Self> {
        if d == 0 || d > MAX_TRIANGLE_EXACTNESS {
            return Err(Error::QuadratureOrder {
                requested: d,
                max: MAX_TRIANGLE_EXACTNESS,
            });
        }
        let (s_nodes, s_weights) = gauss_legendre_unit((d + 2).div_ceil(2));
        let (t_nodes, t_weights) = gauss_legendre_unit((d + 1).div_ceil(2));
        let mut points = Vec::with_capacity(s_nodes.len() * t_nodes.len());
        let mut weights = Vec::with_capacity(points.capacity());
        for (&s, &ws) in s_nodes.iter().zip(&s_weights) {
            for (&t, &wt) in t_nodes.iter().zip(&t_weights) {
                points.push([s, t * (1.0 - s)]);
                weights.push(ws * wt * (1.0 - s));
            }
        }
        Ok(Self {
            points,
            weights,
            exactness: d,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

impl EdgeQuadrature {
    /// Gauss–Legendre with `⌈(d + 1)/2⌉` points.
    pub fn with_exactness(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::QuadratureOrder {
                requested: d,
                max: usize::MAX,
            });
        }
        let (points, weights) = gauss_legendre_unit((d + 1).div_ceil(2));
        Ok(Self {
            points,
            weights,
            exactness: d,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for i in 0..q.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(q, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if q == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=q {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[0, 1]`.
pub fn gauss_legendre_unit(q: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(q);
    (
        x.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        w.iter().map(|w| 0.5 * w).collect(),
    )
}
