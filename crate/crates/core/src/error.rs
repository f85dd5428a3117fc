use alloc::string::String;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} is out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected} values, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("insufficient data: need at least {needed} observations, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error(
        "singular design: column {index} ({name}) is linearly dependent on the previous columns"
    )]
    SingularDesign { index: usize, name: String },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("degenerate data: {0}")]
    Degenerate(&'static str),

    #[error("length mismatch: {left} intervals but {right} outcomes")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid specification: {0}")]
    Invalid(String),

    #[error("cell n={n} p={p} rho2={rho2} rho_x={rho_x}: {missing} of {replications} replications failed to fit")]
    TooManyMissing {
        n: usize,
        p: usize,
        rho2: f64,
        rho_x: f64,
        missing: usize,
        replications: usize,
    },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
