//! One function per fidelity route, each producing a checked [`FidelityReport`].

use num_complex::Complex64;

use tcs_fidelity::closed_form::{optimal_beta, tcs_fidelity, tcs_log_fidelity};
use tcs_fidelity::fock_oracle::{displaced_thermal_matrix, uhlmann_fidelity_detailed};
use tcs_fidelity::gaussian_overlap::pure_overlap;
use tcs_fidelity::optimizer::{maximize_overlap, OptimizerConfig};
use tcs_fidelity::states::{purification_gaussian_form, DisplacedThermalState, PurificationSpec};

use crate::report::{FidelityReport, Route};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteOptions {
    pub cutoff: usize,
    pub optimizer: OptimizerConfig,
}

impl Default for RouteOptions {
    fn default() -> Self {
        Self {
            cutoff: tcs_fidelity::fock_oracle::DEFAULT_CUTOFF,
            optimizer: OptimizerConfig::default(),
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Evaluates one route. `warnings` collects messages meant for stderr.
pub fn evaluate(
    route: Route,
    s1: &DisplacedThermalState,
    s2: &DisplacedThermalState,
    options: &RouteOptions,
    warnings: &mut Vec<String>,
) -> Result<FidelityReport, CliError> {
    match route {
        Route::ClosedForm => {
            let f = tcs_fidelity(s1, s2).map_err(numerical)?;
            let log_f = tcs_log_fidelity(s1, s2).map_err(numerical)?;
            FidelityReport::new(route, f.value())
                .map(|r| r.diagnostic("log_fidelity", log_f))
                .map_err(CliError::Numerical)
        }
        Route::GaussianOverlap => {
            let beta = optimal_beta(s1, s2);
            let reference = PurificationSpec::of(s1, Complex64::new(0.0, 0.0)).map_err(numerical)?;
            let other = PurificationSpec::of(s2, beta).map_err(numerical)?;
            let overlap = pure_overlap(
                &purification_gaussian_form(&reference),
                &purification_gaussian_form(&other),
            )
            .map_err(numerical)?;
            FidelityReport::new(route, overlap.value)
                .map(|r| r.with_beta(beta).diagnostic("log_fidelity", overlap.log_value))
                .map_err(CliError::Numerical)
        }
        Route::PurificationOptimized => {
            let result = maximize_overlap(s1, s2, &options.optimizer).map_err(numerical)?;
            if !result.converged {
                return Err(CliError::Numerical(format!(
                    "optimizer did not converge after {} iterations (gradient norm {:e})",
                    result.iterations, result.gradient_norm
                )));
            }
            FidelityReport::new(route, result.value)
                .map(|r| {
                    r.with_beta(result.beta_star)
                        .diagnostic("gradient_norm", result.gradient_norm)
                        .diagnostic("iterations", result.iterations as f64)
                })
                .map_err(CliError::Numerical)
        }
        Route::Oracle => {
            let n = options.cutoff;
            let rho1 = displaced_thermal_matrix(s1, n).map_err(numerical)?;
            let rho2 = displaced_thermal_matrix(s2, n).map_err(numerical)?;
            let uhlmann = uhlmann_fidelity_detailed(&rho1, &rho2).map_err(numerical)?;
            if uhlmann.clipped_significantly() {
                warnings.push(format!(
                    "oracle clipped a negative eigenvalue {:e} at cutoff {n}",
                    uhlmann.min_eigenvalue
                ));
            }
            let tail = s1
                .thermal
                .truncation_tail(n)
                .max(s2.thermal.truncation_tail(n));
            FidelityReport::new(route, uhlmann.fidelity)
                .map(|r| {
                    r.with_cutoff(n)
                        .diagnostic("min_eigenvalue", uhlmann.min_eigenvalue)
                        .diagnostic("tail", tail)
                })
                .map_err(CliError::Numerical)
        }
    }
}
