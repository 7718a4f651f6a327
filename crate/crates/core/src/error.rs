use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The CLI maps [`Error::is_convergence_failure`] to exit code 2 and every
/// other variant to exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("|u| = {abs} exceeds the validity radius {max}")]
    OutsideValidityDisk { abs: f64, max: f64 },

    #[error("branch tracking failed near u = {at}: square-root candidates collide")]
    BranchAmbiguity { at: Complex64 },

    #[error("slope ({p}, {q}) is exceptional (non-hyperbolic filling)")]
    ExceptionalSlope { p: i64, q: i64 },

    #[error("filling equation for slope ({p}, {q}) did not converge: {reason}")]
    NonHyperbolicOrOutOfRange { p: f64, q: f64, reason: String },

    #[error("critical point of V_{p} not found: {reason}")]
    CriticalPointNotFound { p: i64, reason: String },

    #[error("extrapolation fit failed: {0}")]
    FitError(String),
}

impl Error {
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::BranchAmbiguity { .. }
                | Error::NonHyperbolicOrOutOfRange { .. }
                | Error::CriticalPointNotFound { .. }
                | Error::FitError(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} is not finite: {z}")))
    }
}
