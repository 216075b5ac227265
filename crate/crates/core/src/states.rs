//! Displaced thermal states, their two-mode Gaussian purifications, and the
//! characteristic functions that describe both.
//!
//! Conventions used throughout the crate:
//!
//! * Characteristic functions are symmetrically ordered, `χ(λ) = ⟨D(λ)⟩` with
//!   `D(λ) = exp(λa† − λ*a)`.
//! * Quadratures are `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, so the vacuum has
//!   variance 1/2 and a coherent amplitude `α` sits at `(√2 Re α, √2 Im α)`.
//! * Real vectors are ordered `(x₁, p₁, x₂, p₂)`.
//! * With `r = (x, p)` the Weyl operator is `D(λ) = exp(i ξᵀ r)` where
//!   `ξ = (√2 Im λ, −√2 Re λ)`, hence `χ(λ) = exp(−½ ξᵀVξ + i ξᵀd)` for a
//!   Gaussian state with covariance `V` and mean `d`.

use nalgebra::{Matrix4, Vector2, Vector4};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{require_finite, Error, Result};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Largest mean occupancy accepted. Beyond this `s₁s₂ → 1` and the overlap
/// exponents lose all precision in double arithmetic.
pub const MAX_MEAN_OCCUPANCY: f64 = 1e8;

/// Mean thermal occupancy for a mode of angular frequency `omega` (rad/s) at
/// temperature `temperature` (K).
pub fn mean_occupancy_from_temperature(temperature: f64, omega: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain {
            name: "temperature",
            requirement: "positive and finite",
            value: temperature,
        });
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain {
            name: "angular frequency",
            requirement: "positive and finite",
            value: omega,
        });
    }
    mean_occupancy_from_ratio(HBAR * omega / (BOLTZMANN * temperature))
}

/// Mean occupancy `1 / (e^x − 1)` from the dimensionless ratio `x = ħω / k_B T`.
pub fn mean_occupancy_from_ratio(ratio: f64) -> Result<f64> {
    if ratio.is_nan() || ratio <= 0.0 {
        return Err(Error::Domain {
            name: "energy ratio ħω/k_BT",
            requirement: "positive",
            value: ratio,
        });
    }
    // expm1 keeps full precision in the high-temperature limit.
    Ok(1.0 / ratio.exp_m1())
}

/// Where a mean occupancy came from, when it was derived from physical inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ThermalOrigin {
    Temperature { kelvin: f64, angular_frequency: f64 },
    EnergyRatio(f64),
}

/// Thermal part of a state: the mean occupancy `n̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalParams {
    mean_occupancy: f64,
    origin: Option<ThermalOrigin>,
}

impl ThermalParams {
    pub fn new(mean_occupancy: f64) -> Result<Self> {
        if mean_occupancy.is_nan() || mean_occupancy < 0.0 {
            return Err(Error::Domain {
                name: "mean occupancy",
                requirement: "non-negative",
                value: mean_occupancy,
            });
        }
        if mean_occupancy > MAX_MEAN_OCCUPANCY {
            return Err(Error::Range(mean_occupancy));
        }
        Ok(Self {
            mean_occupancy,
            origin: None,
        })
    }

    pub fn from_temperature(kelvin: f64, angular_frequency: f64) -> Result<Self> {
        let n = mean_occupancy_from_temperature(kelvin, angular_frequency)?;
        Ok(Self {
            origin: Some(ThermalOrigin::Temperature {
                kelvin,
                angular_frequency,
            }),
            ..Self::new(n)?
        })
    }

    pub fn from_energy_ratio(ratio: f64) -> Result<Self> {
        let n = mean_occupancy_from_ratio(ratio)?;
        Ok(Self {
            origin: Some(ThermalOrigin::EnergyRatio(ratio)),
            ..Self::new(n)?
        })
    }

    pub fn vacuum() -> Self {
        Self {
            mean_occupancy: 0.0,
            origin: None,
        }
    }

    pub fn mean_occupancy(&self) -> f64 {
        self.mean_occupancy
    }

    pub fn origin(&self) -> Option<ThermalOrigin> {
        self.origin
    }

    /// Ratio of successive thermal eigenvalues, `s = n̄/(n̄+1) ∈ [0, 1)`.
    pub fn ratio(&self) -> f64 {
        self.mean_occupancy / (self.mean_occupancy + 1.0)
    }

    /// Thermal eigenvalue `η_j = s^j/(n̄+1)`.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        self.ratio().powi(j as i32) / (self.mean_occupancy + 1.0)
    }

    /// Weight of the thermal distribution above level `cutoff − 1`, `s^cutoff`.
    pub fn truncation_tail(&self, cutoff: usize) -> f64 {
        self.ratio().powi(cutoff as i32)
    }

    /// `√(n̄(n̄+1))`, the two-mode correlation of the Schmidt purification.
    pub fn correlation(&self) -> f64 {
        (self.mean_occupancy * (self.mean_occupancy + 1.0)).sqrt()
    }
}

/// A one-mode displaced thermal state `D(α) ρ_T D†(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisplacedThermalState {
    pub thermal: ThermalParams,
    pub displacement: Complex64,
}

impl DisplacedThermalState {
    pub fn new(mean_occupancy: f64, displacement: Complex64) -> Result<Self> {
        Self::with_thermal(ThermalParams::new(mean_occupancy)?, displacement)
    }

    pub fn with_thermal(thermal: ThermalParams, displacement: Complex64) -> Result<Self> {
        require_finite("displacement (real part)", displacement.re)?;
        require_finite("displacement (imaginary part)", displacement.im)?;
        Ok(Self {
            thermal,
            displacement,
        })
    }

    pub fn mean_occupancy(&self) -> f64 {
        self.thermal.mean_occupancy()
    }

    pub fn ratio(&self) -> f64 {
        self.thermal.ratio()
    }
}

/// A two-mode Gaussian purification: thermal correlations of `n̄` with mode 1
/// displaced by `alpha` and mode 2 by `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurificationSpec {
    pub thermal: ThermalParams,
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl PurificationSpec {
    pub fn new(thermal: ThermalParams, alpha: Complex64, beta: Complex64) -> Result<Self> {
        for (name, v) in [
            ("alpha (real part)", alpha.re),
            ("alpha (imaginary part)", alpha.im),
            ("beta (real part)", beta.re),
            ("beta (imaginary part)", beta.im),
        ] {
            require_finite(name, v)?;
        }
        Ok(Self {
            thermal,
            alpha,
            beta,
        })
    }

    /// Purification of `state` whose ancilla is displaced by `beta`.
    pub fn of(state: &DisplacedThermalState, beta: Complex64) -> Result<Self> {
        Self::new(state.thermal, state.displacement, beta)
    }

    pub fn mode1(&self) -> DisplacedThermalState {
        DisplacedThermalState {
            thermal: self.thermal,
            displacement: self.alpha,
        }
    }

    pub fn mode2(&self) -> DisplacedThermalState {
        DisplacedThermalState {
            thermal: self.thermal,
            displacement: self.beta,
        }
    }
}

/// Characteristic function of the purification at `(λ₁, λ₂)`.
pub fn purification_cf(spec: &PurificationSpec, lambda1: Complex64, lambda2: Complex64) -> Complex64 {
    let n = spec.thermal.mean_occupancy();
    let c = spec.thermal.correlation();
    let gaussian = -(n + 0.5) * (lambda1.norm_sqr() + lambda2.norm_sqr())
        + c * 2.0 * (lambda1 * lambda2).re;
    let phase = displacement_phase(lambda1, spec.alpha) + displacement_phase(lambda2, spec.beta);
    Complex64::new(gaussian, phase).exp()
}

/// Characteristic function of a displaced thermal state.
pub fn tcs_cf(state: &DisplacedThermalState, lambda: Complex64) -> Complex64 {
    let n = state.mean_occupancy();
    Complex64::new(
        -(n + 0.5) * lambda.norm_sqr(),
        displacement_phase(lambda, state.displacement),
    )
    .exp()
}

// λα* − λ*α is purely imaginary; returns its imaginary part.
fn displacement_phase(lambda: Complex64, alpha: Complex64) -> f64 {
    2.0 * (lambda * alpha.conj()).im
}

/// Mean quadratures `(x, p)` of a coherent amplitude.
pub fn quadratures(alpha: Complex64) -> Vector2<f64> {
    Vector2::new(
        std::f64::consts::SQRT_2 * alpha.re,
        std::f64::consts::SQRT_2 * alpha.im,
    )
}

/// Real vector `ξ` with `D(λ) = exp(i ξᵀ (x, p))`.
pub fn cf_argument(lambda: Complex64) -> Vector2<f64> {
    Vector2::new(
        std::f64::consts::SQRT_2 * lambda.im,
        -std::f64::consts::SQRT_2 * lambda.re,
    )
}

/// A two-mode Gaussian state given by its covariance matrix and mean vector,
/// both in `(x₁, p₁, x₂, p₂)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianForm {
    pub covariance: Matrix4<f64>,
    pub displacement_vector: Vector4<f64>,
}

impl GaussianForm {
    /// Validates symmetry (to 1e-12 relative) and positive definiteness.
    pub fn new(covariance: Matrix4<f64>, displacement_vector: Vector4<f64>) -> Result<Self> {
        let scale = covariance.amax().max(1.0);
        if (covariance - covariance.transpose()).amax() > 1e-12 * scale {
            return Err(Error::NotPositiveDefinite);
        }
        if covariance.iter().chain(displacement_vector.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite Gaussian form entry".into()));
        }
        if covariance.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            covariance,
            displacement_vector,
        })
    }

    pub fn determinant(&self) -> f64 {
        self.covariance.determinant()
    }

    /// Pure two-mode Gaussian states have `det V = 1/16`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.determinant() - 1.0 / 16.0).abs() <= tol
    }

    /// Evaluates `exp(−½ ξᵀVξ + i ξᵀd)` at `(λ₁, λ₂)`.
    pub fn cf(&self, lambda1: Complex64, lambda2: Complex64) -> Complex64 {
        let a = cf_argument(lambda1);
        let b = cf_argument(lambda2);
        let xi = Vector4::new(a[0], a[1], b[0], b[1]);
        let quad = (xi.transpose() * self.covariance * xi)[(0, 0)];
        Complex64::new(-0.5 * quad, xi.dot(&self.displacement_vector)).exp()
    }
}

impl Serialize for GaussianForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[f64; 4]> = (0..4)
            .map(|i| {
                let r = self.covariance.row(i);
                [r[0], r[1], r[2], r[3]]
            })
            .collect();
        let disp: Vec<f64> = self.displacement_vector.iter().copied().collect();
        let mut s = serializer.serialize_struct("GaussianForm", 2)?;
        s.serialize_field("cov", &rows)?;
        s.serialize_field("disp", &disp)?;
        s.end()
    }
}

/// Covariance and mean of a purification.
pub fn purification_gaussian_form(spec: &PurificationSpec) -> GaussianForm {
    let diag = spec.thermal.mean_occupancy() + 0.5;
    let c = spec.thermal.correlation();
    #[rustfmt::skip]
    let covariance = Matrix4::new(
        diag, 0.0,  c,    0.0,
        0.0,  diag, 0.0,  -c,
        c,    0.0,  diag, 0.0,
        0.0,  -c,   0.0,  diag,
    );
    let a = quadratures(spec.alpha);
    let b = quadratures(spec.beta);
    GaussianForm {
        covariance,
        displacement_vector: Vector4::new(a[0], a[1], b[0], b[1]),
    }
}

/// Heisenberg–Weyl composition `D(α)D(β) = phase · D(α+β)`.
pub fn weyl_compose(alpha: Complex64, beta: Complex64) -> (Complex64, Complex64) {
    // αβ* − α*β = 2i Im(αβ*)
    let phase = Complex64::from_polar(1.0, (alpha * beta.conj()).im);
    (phase, alpha + beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn occupancy_spot_values() {
        assert!((mean_occupancy_from_ratio(2f64.ln()).unwrap() - 1.0).abs() < 1e-15);
        assert!((mean_occupancy_from_ratio(1.5f64.ln()).unwrap() - 2.0).abs() < 1e-14);
        assert!(mean_occupancy_from_ratio(800.0).unwrap() < 1e-300);
        assert_eq!(mean_occupancy_from_ratio(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn occupancy_from_temperature_matches_ratio() {
        let omega = 2.0 * std::f64::consts::PI * 5e9;
        let t = 0.05;
        let n = mean_occupancy_from_temperature(t, omega).unwrap();
        let x = HBAR * omega / (BOLTZMANN * t);
        assert_eq!(n, 1.0 / x.exp_m1());
        assert!(mean_occupancy_from_temperature(1e-9, omega).unwrap() < 1e-12);
        let p = ThermalParams::from_temperature(t, omega).unwrap();
        assert_eq!(p.mean_occupancy(), n);
    }

    #[test]
    fn occupancy_rejects_bad_inputs() {
        assert!(mean_occupancy_from_temperature(0.0, 1.0).is_err());
        assert!(mean_occupancy_from_temperature(1.0, -1.0).is_err());
        assert!(mean_occupancy_from_ratio(0.0).is_err());
        assert!(ThermalParams::new(-0.1).is_err());
        assert!(ThermalParams::new(f64::NAN).is_err());
        assert!(matches!(ThermalParams::new(2e8), Err(Error::Range(_))));
        assert!(DisplacedThermalState::new(1.0, c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn ratio_is_below_one() {
        for n in [0.0, 1e-3, 1.0, 1e4, MAX_MEAN_OCCUPANCY] {
            let s = ThermalParams::new(n).unwrap().ratio();
            assert!((0.0..1.0).contains(&s));
        }
    }

    #[test]
    fn cf_normalization_and_vacuum() {
        let spec = PurificationSpec::new(ThermalParams::new(1.3).unwrap(), c(0.2, -1.0), c(3.0, 0.5)).unwrap();
        assert_eq!(purification_cf(&spec, c(0.0, 0.0), c(0.0, 0.0)), c(1.0, 0.0));

        let vac = PurificationSpec::new(ThermalParams::vacuum(), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let l = c(0.7, -0.4);
        let got = purification_cf(&vac, l, c(0.0, 0.0));
        assert!((got - c((-l.norm_sqr() / 2.0).exp(), 0.0)).norm() < 1e-16);
    }

    #[test]
    fn coherent_state_cf_sign() {
        // ⟨α|D(λ)|α⟩ = exp(−|λ|²/2 + λα* − λ*α)
        let alpha = c(0.8, 0.3);
        let lambda = c(-0.2, 0.6);
        let state = DisplacedThermalState::new(0.0, alpha).unwrap();
        let expected = (-lambda.norm_sqr() / 2.0 + lambda * alpha.conj() - lambda.conj() * alpha).exp();
        assert!((tcs_cf(&state, lambda) - expected).norm() < 1e-15);
    }

    #[test]
    fn tcs_cf_is_mode1_marginal() {
        let state = DisplacedThermalState::new(0.5, c(1.0, 1.0)).unwrap();
        let l = c(0.1, 0.0);
        for beta in [c(0.0, 0.0), c(-2.0, 0.7), c(5.0, 5.0)] {
            let spec = PurificationSpec::of(&state, beta).unwrap();
            assert_eq!(purification_cf(&spec, l, c(0.0, 0.0)), tcs_cf(&state, l));
            assert_eq!(purification_cf(&spec, c(0.0, 0.0), l), tcs_cf(&spec.mode2(), l));
        }
    }

    #[test]
    fn covariance_spot_values() {
        let vac = purification_gaussian_form(
            &PurificationSpec::new(ThermalParams::vacuum(), c(0.0, 0.0), c(0.0, 0.0)).unwrap(),
        );
        assert_eq!(vac.covariance, Matrix4::identity() * 0.5);
        assert_eq!(vac.determinant(), 1.0 / 16.0);

        let g = purification_gaussian_form(
            &PurificationSpec::new(ThermalParams::new(1.0).unwrap(), c(0.0, 0.0), c(0.0, 0.0)).unwrap(),
        );
        let r2 = 2f64.sqrt();
        assert_eq!(g.covariance[(0, 0)], 1.5);
        assert_eq!(g.covariance[(0, 2)], r2);
        assert_eq!(g.covariance[(1, 3)], -r2);
        assert_eq!(g.covariance[(3, 1)], -r2);
        assert_eq!(g.covariance[(0, 1)], 0.0);
        assert!((g.determinant() - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_form_cf_matches_closed_form() {
        let spec = PurificationSpec::new(ThermalParams::new(0.7).unwrap(), c(0.3, -0.9), c(-1.1, 0.4)).unwrap();
        let g = purification_gaussian_form(&spec);
        for (l1, l2) in [(c(0.2, 0.1), c(-0.3, 0.5)), (c(-0.8, 0.0), c(0.0, 0.9)), (c(0.5, 0.5), c(0.5, -0.5))] {
            assert!((g.cf(l1, l2) - purification_cf(&spec, l1, l2)).norm() < 1e-14);
        }
    }

    #[test]
    fn gaussian_form_validation_and_json() {
        let bad = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, 1.0));
        assert_eq!(GaussianForm::new(bad, Vector4::zeros()), Err(Error::NotPositiveDefinite));
        let mut asym = Matrix4::identity();
        asym[(0, 1)] = 0.1;
        assert!(GaussianForm::new(asym, Vector4::zeros()).is_err());

        let g = GaussianForm::new(Matrix4::identity() * 0.5, Vector4::new(1.0, 0.0, 0.0, -2.0)).unwrap();
        assert!(g.is_pure(1e-15));
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"cov":[[0.5,0.0,0.0,0.0],[0.0,0.5,0.0,0.0],[0.0,0.0,0.5,0.0],[0.0,0.0,0.0,0.5]],"disp":[1.0,0.0,0.0,-2.0]}"#
        );
    }

    #[test]
    fn weyl_compose_spot_values() {
        let a = c(0.4, -1.2);
        assert_eq!(weyl_compose(a, c(0.0, 0.0)), (c(1.0, 0.0), a));
        let (phase, sum) = weyl_compose(a, -a);
        assert_eq!(sum, c(0.0, 0.0));
        assert!((phase - c(1.0, 0.0)).norm() < 1e-16);
        let (phase, sum) = weyl_compose(c(1.0, 0.0), c(0.0, 1.0));
        assert_eq!(sum, c(1.0, 1.0));
        assert!((phase - c(0.0, -1.0).exp()).norm() < 1e-16);
    }

    fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
        (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
    }

    proptest! {
        #[test]
        fn purity_holds_for_any_occupancy(n in 0.0f64..10.0) {
            let spec = PurificationSpec::new(ThermalParams::new(n).unwrap(), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            let det = purification_gaussian_form(&spec).determinant();
            prop_assert!((det - 1.0 / 16.0).abs() < 1e-12);
        }

        #[test]
        fn cf_is_bounded(n in 0.0f64..5.0, a in complex_in(3.0), b in complex_in(3.0),
                         l1 in complex_in(2.0), l2 in complex_in(2.0)) {
            let spec = PurificationSpec::new(ThermalParams::new(n).unwrap(), a, b).unwrap();
            prop_assert!(purification_cf(&spec, l1, l2).norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn weyl_phase_is_unimodular(a in complex_in(10.0), b in complex_in(10.0)) {
            let (phase, _) = weyl_compose(a, b);
            prop_assert!((phase.norm() - 1.0).abs() < 1e-14);
        }
    }
}
