use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sector id {0}, expected 1, 2 or 3")]
    InvalidSector(u8),
    #[error("coincident points: angle or distance is undefined")]
    CoincidentPoints,
    #[error("half-power beam width must lie in (0, pi), got {0} rad")]
    DegenerateBeamWidth(f64),
    #[error("{name} out of domain: {reason}")]
    Domain { name: &'static str, reason: String },
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        name,
        reason: reason.into(),
    }
}
