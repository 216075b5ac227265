//! Closed-form fidelities between displaced thermal states and the overlap of
//! their Gaussian purifications as a function of the ancilla displacement.
//!
//! Differences such as `√((n₁+1)(n₂+1)) − √(n₁n₂)` and `1 − √(s₁s₂)` are
//! evaluated through their conjugate forms so large occupancies do not cancel.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{DisplacedThermalState, PurificationSpec};

/// A transition probability in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FidelityValue(f64);

impl FidelityValue {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                name: "fidelity",
                requirement: "in (0, 1]",
                value,
            })
        }
    }

    /// Rounding in the exponent can leave a probability a few ulps above 1.
    fn from_log(log_value: f64) -> Result<Self> {
        let value = log_value.exp();
        if value == 0.0 {
            return Err(Error::Numerical(format!(
                "fidelity exp({log_value:e}) underflows double precision"
            )));
        }
        Self::new(value.min(1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<FidelityValue> for f64 {
    fn from(f: FidelityValue) -> f64 {
        f.0
    }
}

fn check_occupancy(name: &'static str, n: f64) -> Result<()> {
    if n.is_nan() || n < 0.0 || n.is_infinite() {
        return Err(Error::Domain {
            name,
            requirement: "non-negative and finite",
            value: n,
        });
    }
    if n > crate::states::MAX_MEAN_OCCUPANCY {
        return Err(Error::Range(n));
    }
    Ok(())
}

fn thermal_log_fidelity(n1: f64, n2: f64) -> f64 {
    thermal_fidelity_unchecked(n1, n2).ln()
}

// [√((n₁+1)(n₂+1)) + √(n₁n₂)]² / (n₁+n₂+1)², expanded so every term is positive.
fn thermal_fidelity_unchecked(n1: f64, n2: f64) -> f64 {
    if n1 == n2 {
        return 1.0;
    }
    let a2 = (n1 + 1.0) * (n2 + 1.0);
    let b2 = n1 * n2;
    let num = a2 + b2 + 2.0 * (a2 * b2).sqrt();
    let den = n1 + n2 + 1.0;
    (num / (den * den)).min(1.0)
}

/// Fidelity between two thermal states of occupancies `n1`, `n2`.
pub fn thermal_fidelity(n1: f64, n2: f64) -> Result<FidelityValue> {
    check_occupancy("n1", n1)?;
    check_occupancy("n2", n2)?;
    FidelityValue::new(thermal_fidelity_unchecked(n1, n2))
}

/// Fidelity between two displaced thermal states.
pub fn tcs_fidelity(s1: &DisplacedThermalState, s2: &DisplacedThermalState) -> Result<FidelityValue> {
    FidelityValue::from_log(tcs_log_fidelity(s1, s2)?)
}

/// Natural log of [`tcs_fidelity`]; finite even when the fidelity underflows.
pub fn tcs_log_fidelity(s1: &DisplacedThermalState, s2: &DisplacedThermalState) -> Result<f64> {
    let (n1, n2) = (s1.mean_occupancy(), s2.mean_occupancy());
    check_occupancy("n1", n1)?;
    check_occupancy("n2", n2)?;
    let d2 = (s1.displacement - s2.displacement).norm_sqr();
    Ok(thermal_log_fidelity(n1, n2) - d2 / (n1 + n2 + 1.0))
}

/// Coefficients of the overlap exponent: `(A, B)` with
/// `ln P = ln F_T − A(|β|² + |Δα|²) + 2B Re[β(α₂ − α₁)]`.
fn overlap_coefficients(n1: f64, n2: f64) -> (f64, f64) {
    let (s1, s2) = (n1 / (n1 + 1.0), n2 / (n2 + 1.0));
    let r = (s1 * s2).sqrt();
    // 1 − √(s₁s₂) = (1 − s₁s₂)/(1 + √(s₁s₂)), 1 − s₁s₂ = (n₁+n₂+1)/((n₁+1)(n₂+1))
    let one_minus_r = (n1 + n2 + 1.0) / ((n1 + 1.0) * (n2 + 1.0)) / (1.0 + r);
    ((1.0 + r) / one_minus_r, (s1.sqrt() + s2.sqrt()) / one_minus_r)
}

/// Natural log of [`overlap_probability`].
pub fn overlap_log_probability(reference: &PurificationSpec, other: &PurificationSpec) -> Result<f64> {
    if reference.beta != Complex64::new(0.0, 0.0) {
        return Err(Error::ReferenceDisplaced {
            re: reference.beta.re,
            im: reference.beta.im,
        });
    }
    let (n1, n2) = (reference.thermal.mean_occupancy(), other.thermal.mean_occupancy());
    check_occupancy("n1", n1)?;
    check_occupancy("n2", n2)?;
    let (a, b) = overlap_coefficients(n1, n2);
    let delta = other.alpha - reference.alpha;
    let beta = other.beta;
    // β(α₂−α₁) + β*(α₂*−α₁*) = 2 Re[β(α₂−α₁)]
    let cross = 2.0 * (beta * delta).re;
    Ok(thermal_log_fidelity(n1, n2) - a * (beta.norm_sqr() + delta.norm_sqr()) + b * cross)
}

/// Transition probability between the reference purification (ancilla not
/// displaced) of one state and a purification of another whose ancilla is
/// displaced by `other.beta`.
pub fn overlap_probability(reference: &PurificationSpec, other: &PurificationSpec) -> Result<f64> {
    Ok(overlap_log_probability(reference, other)?.exp().min(1.0))
}

/// Ancilla displacement that maximizes [`overlap_probability`].
pub fn optimal_beta(s1: &DisplacedThermalState, s2: &DisplacedThermalState) -> Complex64 {
    let (r1, r2) = (s1.ratio().sqrt(), s2.ratio().sqrt());
    let k = (r1 + r2) / (1.0 + r1 * r2);
    (s2.displacement - s1.displacement).conj() * k
}

/// Bures distance `√(2(1 − √F))`.
pub fn bures_distance(f: FidelityValue) -> f64 {
    (2.0 * (1.0 - f.0.sqrt())).max(0.0).sqrt()
}

/// [`bures_distance`] for an unchecked probability.
pub fn bures_distance_from(f: f64) -> Result<f64> {
    Ok(bures_distance(FidelityValue::new(f)?))
}
