use thiserror::Error;

/// Errors surfaced by the exact-algebra toolkit.
#[derive(Debug, Error)]
pub enum IpsError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields: {0} vs {1}")]
    MixedFields(String, String),

    #[error("value is not an element of {0}")]
    NotAnElement(String),

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("evaluation point missing an assignment for variable {0}")]
    MissingAssignment(String),

    #[error("polynomials live in different variable universes")]
    UniverseMismatch,

    #[error("{0} variables exceed the exhaustive limit of {1}; use targeted coefficient extraction instead")]
    VarLimitExceeded(usize, usize),

    #[error("axiom vanishes on the Boolean cube at {0}")]
    CubeZero(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, IpsError>;
