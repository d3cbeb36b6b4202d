use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A 1-based outcome index fell outside `1..=dim`.
    #[error("index {index} out of range for dimension {dim}")]
    Range { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("vector is not normalized: squared norm {norm_sqr}")]
    Normalization { norm_sqr: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    /// A value violates the invariant of the type it was meant to become.
    #[error("validation failed: {0}")]
    Validity(String),

    /// The conditional probability P(n | n or above) is undefined because
    /// the tail mass from outcome `index` onwards is zero.
    #[error("degenerate conditional: tail probability from outcome {index} is zero")]
    DegenerateConditional { index: usize },

    #[error("scalar algebra mismatch: {0}")]
    Algebra(String),

    /// Two independent computations of the same quantity disagreed.
    #[error("consistency check failed: {what} (deviation {deviation:e})")]
    Consistency { what: &'static str, deviation: f64 },
}
