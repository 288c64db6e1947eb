use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} must be even and at least 8")]
    InvalidGrid(usize),

    #[error("degree {degree} aliases on a grid of {points} points (need 2*degree < points)")]
    Aliasing { degree: usize, points: usize },

    #[error("grid mismatch: {0} vs {1} points")]
    GridMismatch(usize, usize),

    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),

    #[error("Luxemburg bisection failed: {0}")]
    Bisection(String),

    #[error("supremum is infinite at u = {0}")]
    InfiniteAt(f64),

    #[error("inverse evaluation failed at u = {0}")]
    Inverse(f64),

    #[error("M(X,Y) = {{0}}: the operator is unbounded for every nonzero symbol")]
    ZeroMultiplier,

    #[error("{0} must not be identically zero")]
    ZeroInput(&'static str),

    #[error("modulus mismatch: max pointwise error {0:.3e}")]
    ModulusMismatch(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("scan for k1 exceeded {0} steps")]
    ScanCap(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
