use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system type: {0}")]
    UnsupportedType(String),

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("GKM condition fails for {ty} over F_{p}: {detail}")]
    Gkm { ty: String, p: u32, detail: String },

    #[error("base ring not saturated: {0}")]
    NotSaturated(String),

    #[error("cannot parse inverted-root list: {0}")]
    BadInverted(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator contains the coroot being reduced by")]
    CorootInDenominator,

    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),

    #[error("window is not closed under the right action of {0}")]
    NotSClosed(String),

    #[error("label set is not invariant under {0}")]
    NotSInvariant(String),

    #[error("window order is not certified stable")]
    Unstable,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
