use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis vectors are not real-linearly independent (real rank {rank} < {vectors})")]
    DependentBasis { rank: usize, vectors: usize },

    /// No complex-linear extension exists: the prescribed map fails
    /// `L(iv) = iL(v)` on the complex part of its domain.
    #[error("map is not complex-linear on the complex part of its domain (defect {defect:.3e}, tolerance {tolerance:.3e})")]
    NotComplexLinearOnComplexPart { defect: f64, tolerance: f64 },

    #[error("{what} requires {requested} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        budget: u128,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("fit refused: {usable} usable rows, at least 3 required")]
    FitRefused { usable: usize },

    #[error("polygon is self-intersecting or degenerate")]
    SelfIntersecting,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
