use thiserror::Error;

/// Failures raised by the closed-form evaluators and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters outside the physical domain of the model.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed form hit one of its singular times (a zero of μ₀, a caustic).
    #[error("singular time t = {t}: {what}")]
    Singular { t: f64, what: &'static str },

    /// Adaptive truncation ran out of room before the tail mass became negligible.
    #[error("truncation did not converge: tail mass {tail:e} at Nmax = {nmax}")]
    Convergence { nmax: usize, tail: f64 },

    /// Double precision cannot resolve the requested kernel block.
    #[error("precision loss: {0}")]
    Precision(String),

    #[error("g2 is undefined when the mean photon number is zero")]
    UndefinedCorrelation,

    #[error("degenerate Gaussian integral: {0}")]
    Degenerate(String),

    /// An integrator produced non-finite values.
    #[error("divergence: {0}")]
    Divergence(String),
}

impl Error {
    /// True for violations of the physical parameter domain.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {v}")))
    }
}
