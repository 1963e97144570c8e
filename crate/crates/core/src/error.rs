use alloc::string::String;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("indeterminate under truncation: {0}")]
    Indeterminate(&'static str),
    #[error("series is not real")]
    NonReal,
    #[error("expected a strictly positive value")]
    NotPositive,
    #[error("leading coefficient is not the square of a rational")]
    NotPerfectSquare,
    #[error("substitution requires an irrational root")]
    IrrationalRoot,
    #[error("frame mismatch")]
    FrameMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("envelope width mismatch")]
    WidthMismatch,
    #[error("divergent integral: a variable group without envelope")]
    Divergent,
    #[error("envelope width has no rational square root")]
    IrrationalWidth,
    #[error("cannot add values carrying different powers of pi")]
    PiPowerMismatch,
    #[error("a momentum envelope is present; the operator would not terminate")]
    MomentumEnvelope,
    #[error("integrand still depends on the momenta")]
    MomentumDependence,
    #[error("operator does not respect the degree filtration")]
    NonGraded,
    #[error("star commutator is not divisible by lambda")]
    NotLambdaDivisible,
    #[error("Hamiltonian is not in the Gel'fand ideal")]
    NotInGelfandIdeal,
    #[error("perturbation h must have positive order")]
    NonPositiveOrder,
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
