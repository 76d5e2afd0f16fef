//! Brute-force evaluation of the discrete forms, independent of the
//! assembly path: edges are rediscovered by vertex matching, normals come
//! from the triangle geometry, and integrals use a locally generated
//! Gauss–Legendre / Duffy rule.

#![allow(dead_code)]

use mixed_dg::fespace::DGSpace;
use mixed_dg::mesh::{Mesh, Point};

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on the
/// three-term recurrence.
pub fn gauss(q: usize) -> Vec<(f64, f64)> {
    (0..q)
        .map(|k| {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (q as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=q {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

pub struct Oracle<'a> {
    pub mesh: &'a Mesh,
    pub space: &'a DGSpace,
    line: Vec<(f64, f64)>,
    /// One entry per geometric edge.
    faces: Vec<Face>,
}

#[derive(Debug, Clone, Copy)]
pub struct Face {
    pub a: Point,
    pub b: Point,
    pub inner: usize,
    pub outer: Option<usize>,
    /// Unit normal pointing out of `inner`.
    pub normal: [f64; 2],
}

impl<'a> Oracle<'a> {
    pub fn new(mesh: &'a Mesh, space: &'a DGSpace, points: usize) -> Self {
        let tris = &mesh.triangles;
        let mut faces = Vec::new();
        for (t, tri) in tris.iter().enumerate() {
            for l in 0..3 {
                let (i, j, k) = (tri.vertices[l], tri.vertices[(l + 1) % 3], tri.vertices[(l + 2) % 3]);
                let neighbour = tris.iter().enumerate().position(|(s, other)| {
                    s != t && other.vertices.contains(&i) && other.vertices.contains(&j)
                });
                if matches!(neighbour, Some(s) if s < t) {
                    continue;
                }
                let (a, b, c) = (mesh.vertices[i].point(), mesh.vertices[j].point(), mesh.vertices[k].point());
                let d = [b[0] - a[0], b[1] - a[1]];
                let len = d[0].hypot(d[1]);
                let mut normal = [d[1] / len, -d[0] / len];
                if normal[0] * (c[0] - a[0]) + normal[1] * (c[1] - a[1]) > 0.0 {
                    normal = [-normal[0], -normal[1]];
                }
                faces.push(Face {
                    a,
                    b,
                    inner: t,
                    outer: neighbour,
                    normal,
                });
            }
        }
        Self {
            mesh,
            space,
            line: gauss(points),
            faces,
        }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    fn corners(&self, t: usize) -> [Point; 3] {
        self.mesh.triangles[t].vertices.map(|v| self.mesh.vertices[v].point())
    }

    /// Reference coordinates of physical `p` in triangle `t`, by Cramer's rule.
    fn reference(&self, t: usize, p: Point) -> ([f64; 2], [[f64; 2]; 2]) {
        let [a, b, c] = self.corners(t);
        let (j00, j01, j10, j11) = (b[0] - a[0], c[0] - a[0], b[1] - a[1], c[1] - a[1]);
        let det = j00 * j11 - j01 * j10;
        let (rx, ry) = (p[0] - a[0], p[1] - a[1]);
        let xi = (j11 * rx - j01 * ry) / det;
        let eta = (-j10 * rx + j00 * ry) / det;
        // Rows of J⁻ᵀ.
        let inv_t = [[j11 / det, -j10 / det], [-j01 / det, j00 / det]];
        ([xi, eta], inv_t)
    }

    /// Value and gradient of the field `c` restricted to triangle `t`.
    pub fn eval(&self, c: &[f64], t: usize, p: Point) -> (f64, [f64; 2]) {
        let (x, inv_t) = self.reference(t, p);
        let basis = self.space.basis();
        let local = &c[self.space.element_dofs(t)];
        let values = basis.values(x);
        let grads = basis.gradients(x);
        let mut value = 0.0;
        let mut g = [0.0; 2];
        for ((v, gr), coef) in values.iter().zip(&grads).zip(local) {
            value += coef * v;
            g[0] += coef * gr[0];
            g[1] += coef * gr[1];
        }
        let grad = [inv_t[0][0] * g[0] + inv_t[0][1] * g[1], inv_t[1][0] * g[0] + inv_t[1][1] * g[1]];
        (value, grad)
    }

    /// ∫_K f over a collapsed tensor rule.
    pub fn integrate_triangle(&self, t: usize, mut f: impl FnMut(Point) -> f64) -> f64 {
        let [a, b, c] = self.corners(t);
        let area2 = ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
        let mut total = 0.0;
        for &(s, ws) in &self.line {
            for &(r, wr) in &self.line {
                let u = 0.5 * (1.0 + s);
                let v = 0.5 * (1.0 + r) * (1.0 - u);
                let w = 0.25 * ws * wr * (1.0 - u) * area2;
                let p = [
                    a[0] + u * (b[0] - a[0]) + v * (c[0] - a[0]),
                    a[1] + u * (b[1] - a[1]) + v * (c[1] - a[1]),
                ];
                total += w * f(p);
            }
        }
        total
    }

    pub fn integrate_volume(&self, mut f: impl FnMut(usize, Point) -> f64) -> f64 {
        (0..self.mesh.triangles.len()).map(|t| self.integrate_triangle(t, |p| f(t, p))).sum()
    }

    pub fn integrate_face(&self, face: &Face, mut f: impl FnMut(Point) -> f64) -> f64 {
        let len = (face.b[0] - face.a[0]).hypot(face.b[1] - face.a[1]);
        let mut total = 0.0;
        for &(s, w) in &self.line {
            let t = 0.5 * (1.0 + s);
            let p = [face.a[0] + t * (face.b[0] - face.a[0]), face.a[1] + t * (face.b[1] - face.a[1])];
            total += 0.5 * w * len * f(p);
        }
        total
    }

    pub fn integrate_faces(&self, mut f: impl FnMut(&Face, Point) -> f64) -> f64 {
        self.faces.iter().map(|face| self.integrate_face(face, |p| f(face, p))).sum()
    }

    /// `([w], {∂w/∂n})` across `face`, boundary traces one-sided.
    pub fn jump_flux(&self, c: &[f64], face: &Face, p: Point) -> (f64, f64) {
        let (wi, gi) = self.eval(c, face.inner, p);
        let ni = gi[0] * face.normal[0] + gi[1] * face.normal[1];
        match face.outer {
            Some(o) => {
                let (wo, go) = self.eval(c, o, p);
                let no = go[0] * face.normal[0] + go[1] * face.normal[1];
                (wi - wo, 0.5 * (ni + no))
            }
            None => (wi, ni),
        }
    }

    pub fn mass(&self, w: &[f64], z: &[f64]) -> f64 {
        self.integrate_volume(|t, p| self.eval(w, t, p).0 * self.eval(z, t, p).0)
    }

    /// `B(w, z)`: trial flux over every edge, test flux over interior edges.
    pub fn b(&self, w: &[f64], z: &[f64]) -> f64 {
        let volume = self.integrate_volume(|t, p| {
            let (gw, gz) = (self.eval(w, t, p).1, self.eval(z, t, p).1);
            gw[0] * gz[0] + gw[1] * gz[1]
        });
        let faces = self.integrate_faces(|face, p| {
            let (jw, fw) = self.jump_flux(w, face, p);
            let (jz, fz) = self.jump_flux(z, face, p);
            let mut v = fw * jz;
            if face.outer.is_some() {
                v += fz * jw;
            }
            v
        });
        volume - faces
    }

    /// `J(w, z) = Σ_e σ₀|e|^{-i} p² ∫ [w][z]`.
    pub fn j(&self, w: &[f64], z: &[f64], sigma0: f64, exponent: i32) -> f64 {
        let p2 = (self.space.degree() * self.space.degree()) as f64;
        self.integrate_faces(|face, p| {
            let len = (face.b[0] - face.a[0]).hypot(face.b[1] - face.a[1]);
            let alpha = sigma0 * len.powi(-exponent) * p2;
            alpha * self.jump_flux(w, face, p).0 * self.jump_flux(z, face, p).0
        })
    }

    pub fn load(&self, f: impl Fn(Point) -> f64, z: &[f64]) -> f64 {
        self.integrate_volume(|t, p| f(p) * self.eval(z, t, p).0)
    }

    pub fn unit(&self, k: usize) -> Vec<f64> {
        let mut e = vec![0.0; self.space.total_dofs()];
        e[k] = 1.0;
        e
    }

    /// Dense matrix `A_ab = form(φ_b, φ_a)`.
    pub fn dense(&self, form: impl Fn(&[f64], &[f64]) -> f64) -> Vec<Vec<f64>> {
        let n = self.space.total_dofs();
        let units: Vec<_> = (0..n).map(|k| self.unit(k)).collect();
        (0..n).map(|a| (0..n).map(|b| form(&units[b], &units[a])).collect()).collect()
    }
}
