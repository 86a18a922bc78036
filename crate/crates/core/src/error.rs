use thiserror::Error;

/// Errors raised by the exact-algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LlvError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected a homogeneous element of degree {expected}")]
    WrongDegree { expected: i32 },
    #[error("operator does not have the Lefschetz property")]
    NotLefschetz,
    #[error("degree -2 dual is not unique: solution space has dimension {0}")]
    NonUniqueDual(usize),
    #[error("grading operator lies in the derived subalgebra; the sum is not direct")]
    NotDirectSum,
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("commutator requires two distinct complex structures")]
    EqualIndices,
    #[error("quotient is nonzero in degree {0} above the top degree")]
    TruncationFailure(usize),
    #[error("class is not isotropic")]
    NotIsotropic,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("algebra failed validation: {0}")]
    Validation(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
}

pub type Result<T> = std::result::Result<T, LlvError>;
