//! Broken polynomial spaces on a [`Mesh`].

mod basis;
mod quadrature;

pub use basis::{dimension, ReferenceBasis};
pub use quadrature::{
    gauss_legendre, gauss_legendre_unit, EdgeQuadrature, TriangleQuadrature, MAX_TRIANGLE_EXACTNESS,
};

use std::ops::Range;

use crate::mesh::{Mesh, Point};
use crate::{Error, Result};

/// Affine map `x = origin + jacobian · x̂` from the reference triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub origin: Point,
    /// Column-major: `jacobian[c]` is column `c`.
    pub jacobian: [[f64; 2]; 2],
    pub det: f64,
    /// Inverse Jacobian, row-major.
    inverse: [[f64; 2]; 2],
}

impl AffineMap {
    pub fn new(corners: [Point; 3]) -> Result<Self> {
        let c0 = [corners[1][0] - corners[0][0], corners[1][1] - corners[0][1]];
        let c1 = [corners[2][0] - corners[0][0], corners[2][1] - corners[0][1]];
        let det = c0[0] * c1[1] - c1[0] * c0[1];
        if det == 0.0 {
            return Err(Error::DegenerateTriangle(usize::MAX));
        }
        let inverse = [[c1[1] / det, -c1[0] / det], [-c0[1] / det, c0[0] / det]];
        Ok(Self {
            origin: corners[0],
            jacobian: [c0, c1],
            det,
            inverse,
        })
    }

    pub fn to_physical(&self, x: [f64; 2]) -> Point {
        let [c0, c1] = self.jacobian;
        [
            self.origin[0] + c0[0] * x[0] + c1[0] * x[1],
            self.origin[1] + c0[1] * x[0] + c1[1] * x[1],
        ]
    }

    pub fn to_reference(&self, p: Point) -> [f64; 2] {
        let d = [p[0] - self.origin[0], p[1] - self.origin[1]];
        let a = self.inverse;
        [a[0][0] * d[0] + a[0][1] * d[1], a[1][0] * d[0] + a[1][1] * d[1]]
    }

    /// `J⁻ᵀ ∇̂`.
    pub fn pullback_gradient(&self, g: [f64; 2]) -> [f64; 2] {
        let a = self.inverse;
        [a[0][0] * g[0] + a[1][0] * g[1], a[0][1] * g[0] + a[1][1] * g[1]]
    }
}

/// Basis values and reference gradients tabulated on a triangle rule.
#[derive(Debug, Clone)]
pub struct Tabulation {
    pub rule: TriangleQuadrature,
    pub values: Vec<Vec<f64>>,
    pub gradients: Vec<Vec<[f64; 2]>>,
}

impl Tabulation {
    pub fn new(basis: &ReferenceBasis, rule: TriangleQuadrature) -> Self {
        let values = rule.points.iter().map(|&x| basis.values(x)).collect();
        let gradients = rule.points.iter().map(|&x| basis.gradients(x)).collect();
        Self {
            rule,
            values,
            gradients,
        }
    }
}

/// Discontinuous `P_p` space: every element owns `(p+1)(p+2)/2` dofs and
/// element `e` occupies the contiguous block `e·m .. (e+1)·m`.
#[derive(Debug, Clone)]
pub struct DGSpace {
    basis: ReferenceBasis,
    maps: Vec<AffineMap>,
}

impl DGSpace {
    pub fn new(mesh: &Mesh, degree: usize) -> Result<Self> {
        let basis = ReferenceBasis::new(degree)?;
        let maps = (0..mesh.triangles.len())
            .map(|t| AffineMap::new(mesh.triangle_points(t)).map_err(|_| Error::DegenerateTriangle(t)))
            .collect::<Result<_>>()?;
        Ok(Self { basis, maps })
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> &ReferenceBasis {
        &self.basis
    }

    pub fn dofs_per_element(&self) -> usize {
        self.basis.len()
    }

    pub fn n_elements(&self) -> usize {
        self.maps.len()
    }

    pub fn total_dofs(&self) -> usize {
        self.n_elements() * self.dofs_per_element()
    }

    pub fn element_dofs(&self, element: usize) -> Range<usize> {
        let m = self.dofs_per_element();
        element * m..(element + 1) * m
    }

    pub fn map(&self, element: usize) -> &AffineMap {
        &self.maps[element]
    }

    /// Value of the discrete field at reference point `x̂` of `element`.
    pub fn eval(&self, coefficients: &[f64], element: usize, x: [f64; 2]) -> f64 {
        let local = &coefficients[self.element_dofs(element)];
        self.basis.values(x).iter().zip(local).map(|(a, b)| a * b).sum()
    }

    /// Physical gradient at reference point `x̂` of `element`.
    pub fn eval_gradient(&self, coefficients: &[f64], element: usize, x: [f64; 2]) -> [f64; 2] {
        let local = &coefficients[self.element_dofs(element)];
        let g = self
            .basis
            .gradients(x)
            .iter()
            .zip(local)
            .fold([0.0, 0.0], |acc, (g, c)| [acc[0] + c * g[0], acc[1] + c * g[1]]);
        self.maps[element].pullback_gradient(g)
    }

    /// Nodal interpolant of `f`; continuous data yields a globally
    /// continuous field.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_dofs());
        for map in &self.maps {
            out.extend(self.basis.nodes().iter().map(|&x| f(map.to_physical(x))));
        }
        out
    }

    pub fn tabulate(&self, exactness: usize) -> Result<Tabulation> {
        Ok(Tabulation::new(&self.basis, TriangleQuadrature::with_exactness(exactness)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_triangle_maps_to_itself() {
        let map = AffineMap::new([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(map.jacobian, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(map.det, 1.0);
        assert_eq!(map.to_physical([0.25, 0.5]), [0.25, 0.5]);
    }

    #[test]
    fn rejects_degenerate_triangles() {
        assert!(AffineMap::new([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).is_err());
    }

    #[test]
    fn jacobian_determinant_is_twice_the_area() {
        let mesh = Mesh::uniform(7).unwrap();
        let space = DGSpace::new(&mesh, 1).unwrap();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            assert!((space.map(t).det.abs() - 2.0 * tri.area).abs() < 1e-14);
        }
    }

    #[test]
    fn gradient_of_affine_function_by_chain_rule() {
        let map = AffineMap::new([[0.3, 0.1], [1.2, 0.4], [0.5, 0.9]]).unwrap();
        let f = |p: Point| p[0] + 2.0 * p[1];
        // f ∘ F is affine in x̂, so its reference gradient is exact from two differences.
        let f0 = f(map.to_physical([0.0, 0.0]));
        let ghat = [f(map.to_physical([1.0, 0.0])) - f0, f(map.to_physical([0.0, 1.0])) - f0];
        let g = map.pullback_gradient(ghat);
        assert!((g[0] - 1.0).abs() < 1e-12 && (g[1] - 2.0).abs() < 1e-12);
        let p = map.to_physical([0.2, 0.3]);
        let back = map.to_reference(p);
        assert!((back[0] - 0.2).abs() < 1e-14 && (back[1] - 0.3).abs() < 1e-14);
    }

    #[test]
    fn space_layout() {
        let mesh = Mesh::uniform(3).unwrap();
        for p in 1..=3 {
            let space = DGSpace::new(&mesh, p).unwrap();
            assert_eq!(space.dofs_per_element(), (p + 1) * (p + 2) / 2);
            assert_eq!(space.total_dofs(), 2 * 9 * space.dofs_per_element());
            assert_eq!(space.element_dofs(4).len(), space.dofs_per_element());
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let mesh = Mesh::uniform(4).unwrap();
        let space = DGSpace::new(&mesh, 2).unwrap();
        let f = |p: Point| p[0] * p[0] - 3.0 * p[0] * p[1] + 0.5;
        let c = space.interpolate(f);
        for e in 0..space.n_elements() {
            let x = [0.2, 0.3];
            let p = space.map(e).to_physical(x);
            assert!((space.eval(&c, e, x) - f(p)).abs() < 1e-13);
            let g = space.eval_gradient(&c, e, x);
            assert!((g[0] - (2.0 * p[0] - 3.0 * p[1])).abs() < 1e-12);
            assert!((g[1] + 3.0 * p[0]).abs() < 1e-12);
        }
    }
}
