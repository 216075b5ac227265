//! Truncated Fock-space representations used as a brute-force cross-check.
//!
//! Every operator is an `N × N` matrix over `|0⟩ … |N−1⟩`. Nothing is
//! renormalized after truncation; the discarded thermal weight is `s^N` and
//! callers budget for it via [`ThermalParams::truncation_tail`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laguerre::{laguerre_row, ln_factorials};
use crate::states::{DisplacedThermalState, PurificationSpec, ThermalParams};

/// Default Fock cutoff used by oracle comparisons.
pub const DEFAULT_CUTOFF: usize = 60;
/// Largest deviation from Hermiticity accepted by [`uhlmann_fidelity`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Eigenvalues below `−NEGATIVE_EIGENVALUE_REPORT` are reported as clipped.
pub const NEGATIVE_EIGENVALUE_REPORT: f64 = 1e-10;

/// A dense operator on the truncated single-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    entries: DMatrix<Complex64>,
}

impl FockMatrix {
    pub fn from_entries(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() == 0 {
            return Err(Error::ZeroCutoff);
        }
        if entries.nrows() != entries.ncols() {
            return Err(Error::CutoffMismatch(entries.nrows(), entries.ncols()));
        }
        Ok(Self { entries })
    }

    pub fn identity(cutoff: usize) -> Result<Self> {
        Self::from_entries(DMatrix::identity(cutoff, cutoff))
    }

    pub fn cutoff(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    /// Largest entrywise deviation from `A = A†`.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = flushed_hermitian(&self.entries).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn frobenius_distance(&self, other: &FockMatrix) -> f64 {
        (&self.entries - &other.entries).norm()
    }

    /// Largest entry modulus of `self − other` on the leading `block × block` corner.
    pub fn block_deviation(&self, other: &FockMatrix, block: usize) -> f64 {
        let b = block.min(self.cutoff()).min(other.cutoff());
        let mut worst: f64 = 0.0;
        for i in 0..b {
            for j in 0..b {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }

    pub fn mul(&self, other: &FockMatrix) -> Result<FockMatrix> {
        check_same_cutoff(self.cutoff(), other.cutoff())?;
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> FockMatrix {
        Self {
            entries: &self.entries * factor,
        }
    }

    fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0)
    }
}

/// A pure two-mode state with amplitudes indexed by `(n₁, n₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeVector {
    amplitudes: DMatrix<Complex64>,
}

impl TwoModeVector {
    pub fn from_amplitudes(amplitudes: DMatrix<Complex64>) -> Result<Self> {
        if amplitudes.nrows() == 0 {
            return Err(Error::ZeroCutoff);
        }
        check_same_cutoff(amplitudes.nrows(), amplitudes.ncols())?;
        Ok(Self { amplitudes })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &TwoModeVector) -> Result<Complex64> {
        check_same_cutoff(self.cutoff(), other.cutoff())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

fn check_same_cutoff(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::CutoffMismatch(a, b))
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 {
        Err(Error::ZeroCutoff)
    } else {
        Ok(())
    }
}

/// Thermal state `diag(η_0, …, η_{N−1})`.
pub fn thermal_density_matrix(mean_occupancy: f64, cutoff: usize) -> Result<FockMatrix> {
    check_cutoff(cutoff)?;
    let thermal = ThermalParams::new(mean_occupancy)?;
    let diag = nalgebra::DVector::from_fn(cutoff, |j, _| Complex64::new(thermal.eigenvalue(j), 0.0));
    FockMatrix::from_entries(DMatrix::from_diagonal(&diag))
}

/// Matrix elements `⟨k|D(α)|l⟩` for `k, l < cutoff`.
///
/// The lower triangle `k ≥ l` is
/// `√(l!/k!) α^(k−l) e^(−|α|²/2) L_l^(k−l)(|α|²)`; the upper triangle comes from
/// `D(α)† = D(−α)`.
pub fn displacement_matrix(alpha: Complex64, cutoff: usize) -> Result<FockMatrix> {
    check_cutoff(cutoff)?;
    crate::error::require_finite("alpha (real part)", alpha.re)?;
    crate::error::require_finite("alpha (imaginary part)", alpha.im)?;
    if alpha == Complex64::new(0.0, 0.0) {
        return FockMatrix::identity(cutoff);
    }
    let x = alpha.norm_sqr();
    let ln_abs = alpha.norm().ln();
    let unit = alpha / alpha.norm();
    let ln_fact = ln_factorials(cutoff);
    let mut m = DMatrix::<Complex64>::zeros(cutoff, cutoff);

    let mut phase = Complex64::new(1.0, 0.0);
    for order in 0..cutoff {
        let len = cutoff - order;
        let lag = laguerre_row(order, x, len);
        // upper entries carry (−1)^order and the conjugate phase
        let upper_phase = if order % 2 == 0 { phase.conj() } else { -phase.conj() };
        for (l, lval) in lag.iter().enumerate() {
            let k = l + order;
            let magnitude =
                (0.5 * (ln_fact[l] - ln_fact[k]) + order as f64 * ln_abs - 0.5 * x).exp() * lval;
            m[(k, l)] = phase * magnitude;
            if order > 0 {
                m[(l, k)] = upper_phase * magnitude;
            }
        }
        phase *= unit;
    }
    FockMatrix::from_entries(m)
}

/// `D(α) ρ_T D(α)†` in the truncated basis.
pub fn displaced_thermal_matrix(state: &DisplacedThermalState, cutoff: usize) -> Result<FockMatrix> {
    check_cutoff(cutoff)?;
    let d = displacement_matrix(state.displacement, cutoff)?;
    let mut scaled = d.entries.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::new(state.thermal.eigenvalue(j), 0.0);
    }
    FockMatrix::from_entries(scaled * d.entries.adjoint())
}

/// Eigenvalues below `EIGENVALUE_FLOOR · λ_max` are treated as zero before
/// taking square roots. Round-off puts spurious eigenvalues of order `ε·λ_max`
/// into every truncated density matrix, and their square roots (`~1e-8`)
/// would otherwise dominate the trace.
pub const EIGENVALUE_FLOOR: f64 = 4.0 * f64::EPSILON;

// Entries below this fraction of the largest one are zeroed before an
// eigensolve: their squares underflow and the Householder reduction then
// produces NaN (seen for coherent projectors at N = 80 with a 1e-100 cut).
const FLUSH_RELATIVE: f64 = 1e-30;

fn flushed_hermitian(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let cut = FLUSH_RELATIVE * h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    h.map(|z| if z.norm() < cut { Complex64::new(0.0, 0.0) } else { z })
}

fn floored_sqrt(ev: f64, largest: f64) -> f64 {
    if ev > EIGENVALUE_FLOOR * largest {
        ev.sqrt()
    } else {
        0.0
    }
}

/// Hermitian square root with small and negative eigenvalues clipped to zero.
/// Returns the root and the most negative eigenvalue encountered.
fn hermitian_sqrt(m: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, f64)> {
    let eig = flushed_hermitian(m).symmetric_eigen();
    if eig.eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::Numerical("eigensolver returned a non-finite value".into()));
    }
    let min_ev = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ev = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut v = eig.eigenvectors.clone();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        col *= Complex64::new(floored_sqrt(eig.eigenvalues[j], max_ev), 0.0);
    }
    Ok((&v * eig.eigenvectors.adjoint(), min_ev))
}

/// Sum of singular values of `a`, read off as the positive eigenvalues of the
/// Hermitian dilation `[[0, a], [a†, 0]]` (eigenvalues `±σᵢ`).
fn trace_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    let n = a.nrows();
    let mut dilation = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    dilation.view_mut((0, n), (n, n)).copy_from(a);
    dilation.view_mut((n, 0), (n, n)).copy_from(&a.adjoint());
    let eig = flushed_hermitian(&dilation).symmetric_eigenvalues();
    if eig.iter().any(|e| !e.is_finite()) {
        return Err(Error::Numerical("eigensolver returned a non-finite value".into()));
    }
    Ok(eig.iter().filter(|&&e| e > 0.0).sum())
}

/// Fidelity together with the most negative eigenvalue clipped on the way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UhlmannFidelity {
    pub fidelity: f64,
    pub min_eigenvalue: f64,
}

impl UhlmannFidelity {
    /// Whether clipping discarded an eigenvalue below `−1e-10`.
    pub fn clipped_significantly(&self) -> bool {
        self.min_eigenvalue < -NEGATIVE_EIGENVALUE_REPORT
    }
}

/// `{Tr[(√ρ₁ ρ₂ √ρ₁)^½]}²` with square roots by Hermitian eigendecomposition
/// (see [`EIGENVALUE_FLOOR`]).
///
/// The trace is evaluated as the trace norm `‖√ρ₁ √ρ₂‖₁`, which equals
/// `Tr[(√ρ₁ ρ₂ √ρ₁)^½]` exactly but does not take square roots of the
/// round-off-level eigenvalues of `√ρ₁ ρ₂ √ρ₁`.
pub fn uhlmann_fidelity_detailed(rho1: &FockMatrix, rho2: &FockMatrix) -> Result<UhlmannFidelity> {
    check_same_cutoff(rho1.cutoff(), rho2.cutoff())?;
    for rho in [rho1, rho2] {
        let err = rho.hermiticity_error();
        if !(err <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian(err));
        }
    }
    let (root1, min1) = hermitian_sqrt(&rho1.hermitian_part())?;
    let (root2, min2) = hermitian_sqrt(&rho2.hermitian_part())?;
    let root_trace = trace_norm(&(&root1 * &root2))?;
    Ok(UhlmannFidelity {
        fidelity: root_trace * root_trace,
        min_eigenvalue: min1.min(min2),
    })
}

pub fn uhlmann_fidelity(rho1: &FockMatrix, rho2: &FockMatrix) -> Result<f64> {
    Ok(uhlmann_fidelity_detailed(rho1, rho2)?.fidelity)
}

/// `Σ_k √η_k D(α)|k⟩ ⊗ D(β)|k⟩`, truncated to `cutoff` levels per mode.
pub fn schmidt_purification(
    state: &DisplacedThermalState,
    beta: Complex64,
    cutoff: usize,
) -> Result<TwoModeVector> {
    check_cutoff(cutoff)?;
    let da = displacement_matrix(state.displacement, cutoff)?;
    let db = displacement_matrix(beta, cutoff)?;
    let mut scaled = da.entries;
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex64::new(state.thermal.eigenvalue(k).sqrt(), 0.0);
    }
    TwoModeVector::from_amplitudes(scaled * db.entries.transpose())
}

/// Purification of a [`PurificationSpec`].
pub fn purification_vector(spec: &PurificationSpec, cutoff: usize) -> Result<TwoModeVector> {
    schmidt_purification(&spec.mode1(), spec.beta, cutoff)
}

/// Reduced state of mode 1.
pub fn partial_trace_mode2(v: &TwoModeVector) -> FockMatrix {
    FockMatrix {
        entries: &v.amplitudes * v.amplitudes.adjoint(),
    }
}

/// `⟨v| D(λ₁) ⊗ D(λ₂) |v⟩`.
pub fn cf_of_two_mode_vector(v: &TwoModeVector, lambda1: Complex64, lambda2: Complex64) -> Result<Complex64> {
    let d1 = displacement_matrix(lambda1, v.cutoff())?;
    let d2 = displacement_matrix(lambda2, v.cutoff())?;
    let applied = &d1.entries * &v.amplitudes * d2.entries.transpose();
    Ok(v.amplitudes
        .iter()
        .zip(applied.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Characteristic function of a purification from the Laguerre double series,
/// summed over `n, m < cutoff`. Independent of the matrix route above: the
/// Fock matrix elements enter analytically rather than through products.
pub fn purification_cf_series(
    spec: &PurificationSpec,
    lambda1: Complex64,
    lambda2: Complex64,
    cutoff: usize,
) -> Result<Complex64> {
    check_cutoff(cutoff)?;
    let n_bar = spec.thermal.mean_occupancy();
    let s = spec.thermal.ratio();
    let (x1, x2) = (lambda1.norm_sqr(), lambda2.norm_sqr());
    let disp = 2.0 * (lambda1 * spec.alpha.conj()).im + 2.0 * (lambda2 * spec.beta.conj()).im;
    let prefactor = Complex64::new(-0.5 * x1 - 0.5 * x2, disp).exp() / (n_bar + 1.0);
    if s == 0.0 {
        return Ok(prefactor);
    }
    let ln_s = s.ln();
    let ln_fact = ln_factorials(cutoff);
    let product = lambda1 * lambda2;
    let ln_abs = product.norm().ln();
    let unit = if product.norm() > 0.0 {
        product / product.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };

    let mut total = Complex64::new(0.0, 0.0);
    let mut phase = Complex64::new(1.0, 0.0);
    for order in 0..cutoff {
        if order > 0 && product.norm() == 0.0 {
            break;
        }
        let len = cutoff - order;
        let l1 = laguerre_row(order, x1, len);
        let l2 = laguerre_row(order, x2, len);
        for low in 0..len {
            let high = low + order;
            // ⟨high|D|low⟩ pairs carry (λ₁λ₂)^order, ⟨low|D|high⟩ pairs its conjugate
            let ln_mag = ln_fact[low] - ln_fact[high]
                + 0.5 * (low + high) as f64 * ln_s
                + if order > 0 { order as f64 * ln_abs } else { 0.0 };
            let weight = ln_mag.exp() * l1[low] * l2[low];
            total += phase * weight;
            if order > 0 {
                total += phase.conj() * weight;
            }
        }
        phase *= unit;
    }
    Ok(prefactor * total)
}
