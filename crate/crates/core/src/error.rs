use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the
/// individual operations; numerical failures carry the offending values.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("factor delta must be nonzero")]
    ZeroDelta,

    #[error("scale C must be positive and finite, got {0}")]
    NonpositiveScale(f64),

    #[error("factor list must be nonempty")]
    EmptyFactorList,

    #[error("parameter must be finite, got {0}")]
    NonFiniteParam(f64),

    #[error("sequence is not strictly increasing near index {index}")]
    NonIncreasingSequence { index: i64 },

    #[error("point lists have mismatched lengths {left} and {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("window type too small: m + n = {m} + {n} < 2")]
    TypeTooSmall { m: usize, n: usize },

    #[error("kernel determinant {det:.3e} is negative beyond tolerance; total positivity violated")]
    NegativeDeterminant { det: f64 },

    #[error("condition (C_r) violated: {0}")]
    ConditionCrViolated(String),

    #[error("index window too small: {0}")]
    EmptyWindow(String),

    #[error("selected {size}x{size} submatrix is numerically singular (det = {det:.3e})")]
    SingularSubmatrix { det: f64, size: usize },

    #[error("matrix has non-finite entries")]
    UnboundedEntries,

    #[error("density violation: alpha*beta = {product} >= 1, no oversampling order")]
    DensityViolation { product: f64 },

    #[error("sampling condition C_r(eps) violated: {0}")]
    ConditionViolated(String),

    #[error("data window too small: {0}")]
    WindowTooSmall(String),

    #[error("Riesz lower bound {lower:.3e} below tolerance; spectrum degenerate")]
    DegenerateSpectrum { lower: f64 },

    #[error("index {index} outside the declared window [{lo}, {hi}]")]
    OutOfWindow { index: i64, lo: i64, hi: i64 },

    #[error("epsilon {eps} outside (0, q_Y/2) = (0, {half_q})")]
    InvalidEpsilon { eps: f64, half_q: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
