use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated an operation precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A power series hit its term cap before meeting the truncation test.
    #[error("series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },

    /// `exp(x^2)` does not fit in an f64.
    #[error("erfcx overflows at x = {0}")]
    Overflow(f64),

    /// Quadrature or inversion could not be set up as requested.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Numerical inversion refused because `t` is below the configured guard.
    #[error("inversion refused: t = {t} is below the guard {guard}")]
    BelowGuard { t: f64, guard: f64 },

    /// Input data does not cover the requested evaluation window.
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SeriesNonConvergence { .. }
                | Error::Overflow(_)
                | Error::Configuration(_)
                | Error::BelowGuard { .. }
        )
    }
}
