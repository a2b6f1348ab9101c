use thiserror::Error;

/// Everything that can go wrong while evaluating a strategy.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EscapeError {
    #[error("{name} = {value} is outside its admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A path-length denominator `cos(angle)` vanished.
    #[error("singular evaluation: |cos({angle})| = {cosine:e} is below the guard")]
    Singular { angle: f64, cosine: f64 },

    #[error("domain violation: {0}")]
    Domain(String),

    /// The third leg of a 3-segment path does not end on the right-hand shore.
    #[error("invalid 3-segment realization: {0}")]
    InvalidPath(String),

    #[error("path never reaches the boundary")]
    NoEscape,

    #[error("quadrature failed to converge: estimate {estimate}, error bound {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },

    #[error("|gamma(s)| never reaches 2 within arclength {budget}")]
    SStarNotFound { budget: f64 },

    #[error("circular arcs of the curve family intersect inside the disk")]
    ArcsIntersect,

    #[error("curve specification: {0}")]
    Curve(String),
}

pub type Result<T, E = EscapeError> = std::result::Result<T, E>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(EscapeError::OutOfRange { name, value, range })
    }
}
