//! Uhlmann fidelity between one-mode displaced thermal states.
//!
//! Three independent routes compute the same number:
//!
//! * [`closed_form`]: the analytic fidelity, and the overlap of Gaussian
//!   purifications as a function of the ancilla displacement `β`;
//! * [`gaussian_overlap`] and [`optimizer`]: the overlap evaluated from
//!   covariance matrices, maximized numerically over `β`;
//! * [`fock_oracle`]: truncated number-basis matrices and the
//!   `{Tr[(√ρ₁ ρ₂ √ρ₁)^½]}²` trace formula.
//!
//! [`states`] holds the shared types and phase-space conventions.

pub mod closed_form;
pub mod error;
pub mod fock_oracle;
pub mod gaussian_overlap;
mod laguerre;
pub mod optimizer;
pub mod states;

pub use closed_form::{
    bures_distance, optimal_beta, overlap_probability, tcs_fidelity, thermal_fidelity, FidelityValue,
};
pub use error::{Error, Result};
pub use gaussian_overlap::{pure_overlap, OverlapResult};
pub use optimizer::{maximize_overlap, Method, OptimizationResult, OptimizerConfig};
pub use states::{
    purification_cf, purification_gaussian_form, tcs_cf, weyl_compose, DisplacedThermalState, GaussianForm,
    PurificationSpec, ThermalParams,
};
