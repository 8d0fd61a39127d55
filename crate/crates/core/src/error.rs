use alloc::string::String;

/// Errors raised by the solver pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable `{0}` is not part of the system")]
    UnknownVariable(String),

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("system must have as many polynomials as variables ({npolys} vs {nvars})")]
    NotSquare { npolys: usize, nvars: usize },

    #[error("multidegree {given} for variable {var} is below the actual degree {actual}")]
    MultidegreeTooSmall { var: usize, given: u32, actual: u32 },

    #[error("leading coefficient vanishes")]
    DegenerateLeadingCoefficient,

    #[error("matrix size {m} is smaller than the required degree {needed}")]
    SizeTooSmall { m: usize, needed: usize },

    #[error("interpolation grids intersect in coordinate {0}")]
    GridCollision(usize),

    #[error("symbolic expansion refused: {0}")]
    SymbolicTooLarge(&'static str),

    #[error("matrix is numerically singular")]
    Singular,

    #[error("system is not zero-dimensional: {0}")]
    NonZeroDimensional(String),

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
