use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MassError {
    #[error("degenerate simplex: {0}")]
    Degenerate(String),
    #[error("seminorm is not positively homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("the analytic Jacobian needs a matrix seminorm")]
    AnalyticNeedsMatrix,
    #[error("no piece {0} in the domain")]
    NoSuchPiece(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("the constant C(n) must be supplied")]
    MissingConstant,
    #[error("side lengths {0:?} violate the triangle inequality")]
    TriangleInequality([f64; 3]),
    #[error("perimeter {perimeter} is not below 2π/√κ = {bound}")]
    Perimeter { perimeter: f64, bound: f64 },
    #[error("metric: {0}")]
    Metric(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] nborient_core::Error),
}

pub type Result<T> = std::result::Result<T, MassError>;
