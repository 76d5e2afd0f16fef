//! Mixed discontinuous Galerkin discretisation of the clamped biharmonic
//! problem `Δ²u = f` on the unit square.
//!
//! The fourth-order problem is split into `-Δv = f`, `-Δu = v` and both
//! fields are approximated in a broken `P_p` space. Continuity and the
//! clamped boundary conditions are imposed weakly through a nonsymmetric
//! interior-penalty form whose edge weight is `σ₀ |e|^{-i} p²`.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: structured triangulations with full edge topology.
//! * [`fespace`]: reference Lagrange bases, affine maps and quadrature.
//! * [`sparse`]: a compressed-row operator used by the assembly.
//! * [`assembly`]: the bilinear forms, penalty, mass, load and block system.
//! * [`solver`]: direct solution of the saddle-point system.
//! * [`analysis`]: manufactured solution, error norms and observed rates.
//! * [`study`]: refinement studies driving everything above.
//! * [`output`]: CSV tables and SVG plots.

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod fespace;
pub mod mesh;
pub mod output;
pub mod solver;
pub mod sparse;
pub mod study;

pub use error::{Error, Result};
