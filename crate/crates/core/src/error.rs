use thiserror::Error;

/// Errors surfaced by the exact and numeric layers.
///
/// Precision and budget failures are recoverable by the caller (escalate
/// precision, raise the budget); the rest indicate invalid inputs or a
/// genuine obstruction (a sum collision below the injectivity horizon).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands belong to different bicharacter specs")]
    SpecMismatch,

    #[error("incompatible quadratic fields: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(String, String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("negative power requires determinant +1 or -1 (det = {det})")]
    NegativePower { det: String },

    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u64, context: String },

    #[error("indeterminate at current precision: {0}")]
    Indeterminate(String),

    #[error("matrix has an eigenvalue on the unit circle (not aperiodic)")]
    NotAperiodic,

    #[error("eigenvalue clustering prevents certified separation of root spaces (gap {gap:.3e})")]
    ClusteredSpectrum { gap: f64 },

    #[error("spaced orbit sums collide at n = {n}, k = {k}: tuples {lhs:?} and {rhs:?} map to the same point")]
    Collision {
        n: i64,
        k: usize,
        lhs: Vec<Vec<i64>>,
        rhs: Vec<Vec<i64>>,
    },

    #[error("enumeration budget exhausted: need {needed}, budget {budget}")]
    BudgetExhausted { needed: u128, budget: u64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("matrix is not Hermitian within tolerance (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue floor {floor:.3e})")]
    NotPsd { floor: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("bilinear form is not invariant under the supplied matrix")]
    FormNotInvariant,

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("extraction did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
