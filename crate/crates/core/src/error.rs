use thiserror::Error;

use crate::linalg::LinalgError;

/// Broad failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Precondition,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate edge {tail} -> {head}")]
    DuplicateEdge {
        line: usize,
        tail: String,
        head: String,
    },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("edge ({tail}, {head}) out of range for {n} vertices")]
    EdgeOutOfRange { tail: usize, head: usize, n: usize },
    #[error("duplicate edge ({tail}, {head})")]
    DuplicateEdgeIndex { tail: usize, head: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("vertex subset must be nonempty")]
    EmptySubset,
    #[error("graph is not strongly connected ({components} strongly connected components)")]
    NotStronglyConnected { components: usize },
    #[error("graph is periodic with period {period}")]
    Periodic { period: usize },
    #[error("vertex {vertex} has outdegree 0")]
    ZeroOutdegree { vertex: String },
    #[error("graph is not a symmetric regular digraph")]
    NotRegularSymmetric,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} needs n <= {cap}, graph has n = {n}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("no strongly connected sample after {attempts} attempts")]
    RetryBudgetExhausted { attempts: usize },
    #[error("spectral radius of the non-dominant part is {rho}, chain is numerically periodic")]
    NumericallyPeriodic { rho: f64 },
    #[error("stationary distribution did not converge after {iterations} iterations")]
    StationaryNoConvergence { iterations: usize },
    #[error("stationary distribution fixed-point check failed (deviation {deviation:e})")]
    StationaryCheck { deviation: f64 },
    #[error("EML radicand factor {value:e} is negative")]
    NegativeRadicand { value: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::DuplicateEdge { .. } | Error::EmptyGraph => {
                ErrorClass::Parse
            }
            Error::Linalg(LinalgError::DimensionMismatch { .. }) => ErrorClass::Precondition,
            Error::Linalg(_)
            | Error::NumericallyPeriodic { .. }
            | Error::StationaryNoConvergence { .. }
            | Error::StationaryCheck { .. }
            | Error::NegativeRadicand { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
