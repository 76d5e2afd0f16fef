use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("mesh subdivision count must be at least 1")]
    EmptyMesh,

    #[error("polynomial degree {0} is not supported (expected 1, 2 or 3)")]
    UnsupportedDegree(usize),

    #[error("quadrature of exactness {requested} requested; supported range is 1..={max}")]
    QuadratureOrder { requested: usize, max: usize },

    #[error("triangle {0} has zero area")]
    DegenerateTriangle(usize),

    #[error("{kind} edge given {given} trace(s)")]
    TraceArity { kind: &'static str, given: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix is singular to working precision at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("solve reached relative residual {achieved:.3e}, above tolerance {tol:.3e}")]
    ResidualTooLarge { achieved: f64, tol: f64 },

    #[error("error at level {level} is not positive ({value})")]
    NonPositiveError { level: usize, value: f64 },

    #[error("mesh sizes must be strictly decreasing (level {level})")]
    NonDecreasingMeshSize { level: usize },

    #[error("at least {needed} levels required, got {got}")]
    NotEnoughLevels { needed: usize, got: usize },

    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
