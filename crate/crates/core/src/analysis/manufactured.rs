use crate::mesh::Point;

/// `g(t) = t⁴(1 − t)⁴` expanded in monomials.
const PROFILE: [f64; 9] = [0.0, 0.0, 0.0, 0.0, 1.0, -4.0, 6.0, -4.0, 1.0];

/// `u(x, y) = s · x⁴y⁴(1 − x)⁴(1 − y)⁴` with `s = 1000`, together with the
/// auxiliary field `v = −Δu` and the load `f = Δ²u`.
///
/// `u` and `∇u` vanish on the boundary of the unit square, so the pair is a
/// solution of the clamped problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedSolution {
    pub scale: f64,
}

impl Default for ManufacturedSolution {
    fn default() -> Self {
        Self { scale: 1000.0 }
    }
}

/// `k`-th derivative of the profile.
fn profile(k: usize, t: f64) -> f64 {
    if k == 0 {
        return (t * (1.0 - t)).powi(4);
    }
    let mut coeffs = PROFILE.to_vec();
    for _ in 0..k {
        coeffs = coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
    }
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

pub fn manufactured() -> ManufacturedSolution {
    ManufacturedSolution::default()
}

impl ManufacturedSolution {
    pub fn u(&self, p: Point) -> f64 {
        self.scale * profile(0, p[0]) * profile(0, p[1])
    }

    pub fn grad_u(&self, p: Point) -> [f64; 2] {
        let (gx, gy) = (profile(0, p[0]), profile(0, p[1]));
        [self.scale * profile(1, p[0]) * gy, self.scale * gx * profile(1, p[1])]
    }

    pub fn laplacian_u(&self, p: Point) -> f64 {
        self.scale * (profile(2, p[0]) * profile(0, p[1]) + profile(0, p[0]) * profile(2, p[1]))
    }

    pub fn v(&self, p: Point) -> f64 {
        -self.laplacian_u(p)
    }

    pub fn grad_v(&self, p: Point) -> [f64; 2] {
        let g = |k, t| profile(k, t);
        let (x, y) = (p[0], p[1]);
        [
            -self.scale * (g(3, x) * g(0, y) + g(1, x) * g(2, y)),
            -self.scale * (g(2, x) * g(1, y) + g(0, x) * g(3, y)),
        ]
    }

    /// `Δ²u`.
    pub fn f(&self, p: Point) -> f64 {
        let g = |k, t| profile(k, t);
        let (x, y) = (p[0], p[1]);
        self.scale * (g(4, x) * g(0, y) + 2.0 * g(2, x) * g(2, y) + g(0, x) * g(4, y))
    }

    /// `u(1/2, 1/2) = s · 2⁻¹⁶`.
    pub fn max_value(&self) -> f64 {
        self.scale * 2f64.powi(-16)
    }
}
