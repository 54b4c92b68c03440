use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HpdError {
    /// An argument is outside the operation's domain (non-finite input,
    /// probability outside (0, 1), non-positive scale, malformed data shape).
    #[error("domain error: {0}")]
    Domain(String),

    /// A root finder or bracket search did not converge.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// Data carry no usable information (for instance zero sample spread).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// The truncated posterior has no mass on the constrained set.
    #[error("degenerate posterior: {0}")]
    DegeneratePosterior(String),

    /// A user supplied distribution failed its registration self-check.
    #[error("registration rejected: {0}")]
    Registration(String),

    /// The brute-force HPD oracle ran out of grid before collecting the mass.
    #[error("oracle resolution error: {0}")]
    OracleResolution(String),
}

pub type Result<T> = std::result::Result<T, HpdError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(HpdError::Domain(msg.into()))
}

pub(crate) fn ensure_finite<R: crate::Real>(what: &str, x: R) -> Result<R> {
    if x.is_finite() {
        Ok(x)
    } else {
        domain(format!("{what} must be finite, got {x}"))
    }
}

pub(crate) fn ensure_probability<R: crate::Real>(what: &str, p: R) -> Result<R> {
    if p > R::zero() && p < R::one() {
        Ok(p)
    } else {
        domain(format!("{what} must lie in (0, 1), got {p}"))
    }
}
