//! Transition probability between two pure two-mode Gaussian states computed
//! directly from their covariance matrices and mean vectors.
//!
//! The phase-space integral of `χ₁ χ₂*` is Gaussian and evaluates to
//!
//! ```text
//! Tr(ρ₁ρ₂) = det(V₁ + V₂)^(-1/2) · exp(−½ δᵀ (V₁ + V₂)⁻¹ δ),   δ = d₁ − d₂
//! ```
//!
//! in the vacuum-variance-1/2 convention. For a pure state `det(2V) = 1`, which
//! fixes the prefactor so that every pure state has unit self-overlap.

use nalgebra::Cholesky;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::GaussianForm;

/// Tolerance on `|det V − 1/16|` for a form to count as pure.
pub const PURITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapResult {
    pub value: f64,
    pub log_value: f64,
}

/// Overlap `|⟨ψ₁|ψ₂⟩|²` of two pure Gaussian states.
pub fn pure_overlap(g1: &GaussianForm, g2: &GaussianForm) -> Result<OverlapResult> {
    for g in [g1, g2] {
        if !g.is_pure(PURITY_TOLERANCE) {
            return Err(Error::NotPure(g.determinant()));
        }
    }
    let sum = g1.covariance + g2.covariance;
    let chol = Cholesky::new(sum).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let log_det: f64 = 2.0 * l.diagonal().iter().map(|d| d.ln()).sum::<f64>();

    let delta = g1.displacement_vector - g2.displacement_vector;
    let whitened = l
        .solve_lower_triangular(&delta)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let quad = whitened.norm_squared();

    let log_value = (-0.5 * log_det - 0.5 * quad).min(0.0);
    Ok(OverlapResult {
        value: log_value.exp(),
        log_value,
    })
}
