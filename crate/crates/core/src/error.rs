use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {dim} exceeds the vertex-enumeration cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("{count} facets exceed the facet cap {cap}")]
    FacetCapExceeded { count: usize, cap: usize },

    #[error("body is unbounded: facet normals span only {rank} of {dim} dimensions")]
    UnboundedBody { rank: usize, dim: usize },

    #[error("points span only {rank} of {dim} dimensions")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("linear program is infeasible")]
    InfeasibleBody,

    #[error("space `{0}` is not polyhedral")]
    NotPolyhedral(String),

    #[error("not supported: {0}")]
    NotSupported(String),

    #[error("contact classification ambiguous: deviation {deviation:e} within 10x of tolerance {tol:e}")]
    ToleranceAmbiguous { deviation: f64, tol: f64 },

    #[error("identity decomposition infeasible (residual {residual:e})")]
    InfeasibleDecomposition { residual: f64 },

    #[error("size {size} exceeds cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("no convergence after {iterations} iterations (bounds [{lower}, {upper}])")]
    NoConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("no certified upper bound beats the nuclear norm {nuclear} (best {tau_upper})")]
    NotCertifiable { nuclear: f64, tau_upper: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
