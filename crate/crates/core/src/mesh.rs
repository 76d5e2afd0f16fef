//! Uniform triangulations of the unit square with edge topology.
//!
//! Every cell of an `n × n` grid is split along the diagonal running from its
//! lower-left to its upper-right corner. Vertices are numbered row-major,
//! triangles row-major by cell with the lower triangle first, and edges in the
//! order they are first met while sweeping the triangles.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
}

impl Vertex {
    pub fn point(&self) -> Point {
        [self.x, self.y]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangle {
    /// Counterclockwise.
    pub vertices: [usize; 3],
    /// Local edge `l` joins local vertices `l` and `(l + 1) % 3`.
    pub edges: [usize; 3],
    pub area: f64,
    /// Longest edge.
    pub diameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Ordered counterclockwise with respect to `first`.
    pub vertices: [usize; 2],
    pub length: f64,
    pub kind: EdgeKind,
    pub first: usize,
    pub second: Option<usize>,
    /// Unit normal pointing out of `first`.
    pub normal: [f64; 2],
}

impl Edge {
    pub fn is_interior(&self) -> bool {
        self.kind == EdgeKind::Interior
    }

    /// Adjacent triangles, `first` before `second`.
    pub fn triangles(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.first).chain(self.second)
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<Vertex>,
    pub triangles: Vec<Triangle>,
    pub edges: Vec<Edge>,
    /// Largest triangle diameter.
    pub h: f64,
    /// Subdivisions per side.
    pub n: usize,
}

impl Mesh {
    /// Uniform `n × n` triangulation of `(0,1)²` with `2n²` triangles.
    pub fn uniform(n: usize) -> Result<Mesh> {
        if n == 0 {
            return Err(Error::EmptyMesh);
        }
        let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                vertices.push(Vertex {
                    x: i as f64 / n as f64,
                    y: j as f64 / n as f64,
                });
            }
        }
        let vid = |i: usize, j: usize| j * (n + 1) + i;

        let mut corners = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let (a, b, c, d) = (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
                corners.push([a, b, c]);
                corners.push([a, c, d]);
            }
        }

        let mut triangles = Vec::with_capacity(corners.len());
        let mut edges: Vec<Edge> = Vec::with_capacity(3 * n * n + 2 * n);
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * n * n + 2 * n);
        for (t, tri) in corners.iter().enumerate() {
            let p: Vec<Point> = tri.iter().map(|&v| vertices[v].point()).collect();
            let area = 0.5 * cross(sub(p[1], p[0]), sub(p[2], p[0]));
            if area <= 0.0 {
                return Err(Error::DegenerateTriangle(t));
            }
            let mut local = [0usize; 3];
            let mut diameter: f64 = 0.0;
            for l in 0..3 {
                let (va, vb) = (tri[l], tri[(l + 1) % 3]);
                let key = (va.min(vb), va.max(vb));
                let id = match lookup.get(&key) {
                    Some(&id) => {
                        let edge = &mut edges[id];
                        edge.second = Some(t);
                        edge.kind = EdgeKind::Interior;
                        id
                    }
                    None => {
                        let d = sub(vertices[vb].point(), vertices[va].point());
                        let length = norm(d);
                        let id = edges.len();
                        edges.push(Edge {
                            vertices: [va, vb],
                            length,
                            kind: EdgeKind::Boundary,
                            first: t,
                            second: None,
                            normal: [d[1] / length, -d[0] / length],
                        });
                        lookup.insert(key, id);
                        id
                    }
                };
                local[l] = id;
                diameter = diameter.max(edges[id].length);
            }
            triangles.push(Triangle {
                vertices: *tri,
                edges: local,
                area,
                diameter,
            });
        }

        let h = triangles.iter().map(|t| t.diameter).fold(0.0, f64::max);
        Ok(Mesh {
            vertices,
            triangles,
            edges,
            h,
            n,
        })
    }

    /// Splits the edge ids into `(interior, boundary)`.
    pub fn classify_edges(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.edges.len()).partition(|&e| self.edges[e].is_interior())
    }

    pub fn edge_normal(&self, edge: usize) -> [f64; 2] {
        self.edges[edge].normal
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].vertices.map(|v| self.vertices[v].point())
    }

    pub fn edge_points(&self, e: usize) -> [Point; 2] {
        self.edges[e].vertices.map(|v| self.vertices[v].point())
    }

    pub fn centroid(&self, t: usize) -> Point {
        let p = self.triangle_points(t);
        [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0]
    }

    /// Plain-text dump: `v x y`, `t i j k`, `e i j kind tri1 [tri2]`.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        for v in &self.vertices {
            writeln!(out, "v {:e} {:e}", v.x, v.y)?;
        }
        for t in &self.triangles {
            let [i, j, k] = t.vertices;
            writeln!(out, "t {i} {j} {k}")?;
        }
        for e in &self.edges {
            let [i, j] = e.vertices;
            match (e.kind, e.second) {
                (EdgeKind::Interior, Some(s)) => writeln!(out, "e {i} {j} interior {} {s}", e.first)?,
                _ => writeln!(out, "e {i} {j} boundary {}", e.first)?,
            }
        }
        Ok(())
    }
}

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[cfg(test)]
pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}
