use thiserror::Error;

/// Errors raised by the fidelity routes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("mean occupancy {0:e} is outside the supported range [0, {max:e}]", max = crate::states::MAX_MEAN_OCCUPANCY)]
    Range(f64),

    #[error("covariance matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("Gaussian form is not pure: det V = {0}, expected 1/16")]
    NotPure(f64),

    #[error("reference purification must have zero mode-2 displacement, got {re}{im:+}i")]
    ReferenceDisplaced { re: f64, im: f64 },

    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(usize, usize),

    #[error("cutoff must be at least 1")]
    ZeroCutoff,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "finite",
            value,
        })
    }
}
