use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("seed prefix must contain at least one count")]
    EmptySeed,

    #[error("invalid seed prefix {0:?}: expected comma-separated non-negative integers")]
    SeedSyntax(String),

    #[error("lambda must be finite and positive, got {0}")]
    InvalidLambda(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("witness truncation requires a monotone property, `{0}` is not monotone")]
    NotMonotone(String),

    #[error("invalid property spec {spec:?}: {reason}")]
    PropertySpec { spec: String, reason: String },

    #[error("series coefficients overflow: {k}^{nmax} exceeds the f64 range")]
    CoefficientOverflow { k: usize, nmax: usize },

    #[error("lambert W0 is undefined for x = {0} < -1/e")]
    LambertDomain(f64),

    #[error("decay fit needs at least two positive estimates (decay below MC resolution)")]
    BelowResolution,
}
