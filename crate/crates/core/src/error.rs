use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh parameters: {0}")]
    InvalidMesh(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no quadrature rule of degree {degree} in dimension {dim}")]
    UnsupportedQuadrature { dim: usize, degree: usize },

    #[error("non-finite value assembled on cell {cell}")]
    NonFiniteKernel { cell: usize },

    #[error("non-finite residual entry at dof {dof}")]
    NonFiniteResidual { dof: usize },

    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("solvent depletion at node {node:?} (x = {location:?}): {detail}")]
    SolventDepletion {
        node: Option<usize>,
        location: Vec<f64>,
        detail: String,
    },

    #[error("Newton did not converge: {0}")]
    NotConverged(String),

    #[error("continuation failed at level {level} of {levels}: {reason}")]
    ContinuationFailed {
        level: usize,
        levels: usize,
        reason: String,
        /// Iterations accumulated up to the failure.
        report: Box<crate::solver::SolveReport>,
    },

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
