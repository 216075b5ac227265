use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use tcs_fidelity::closed_form::bures_distance_from;

/// Version of the JSON layout emitted on stdout.
pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance on `bures_distance = √(2(1−√F))` when a report is checked.
pub const BURES_TOLERANCE: f64 = 1e-14;

/// Oracle fidelities may exceed 1 by round-off; anything above this is a bug.
const EXCESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Oracle,
    PurificationOptimized,
    GaussianOverlap,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::ClosedForm,
        Route::Oracle,
        Route::PurificationOptimized,
        Route::GaussianOverlap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed_form",
            Route::Oracle => "oracle",
            Route::PurificationOptimized => "purification_optimized",
            Route::GaussianOverlap => "gaussian_overlap",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complex number as `{"re": …, "im": …}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsonComplex(pub Complex64);

impl Serialize for JsonComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &self.0.re)?;
        st.serialize_field("im", &self.0.im)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub route: Route,
    pub fidelity: f64,
    pub bures_distance: f64,
    pub beta_star: Option<JsonComplex>,
    pub cutoff: Option<usize>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl FidelityReport {
    /// Builds a report, clamping round-off excess above 1 and rejecting
    /// anything outside `(0, 1]`.
    pub fn new(route: Route, fidelity: f64) -> Result<Self, String> {
        let mut diagnostics = BTreeMap::new();
        let mut value = fidelity;
        if value > 1.0 && value <= 1.0 + EXCESS_TOLERANCE {
            diagnostics.insert("excess_above_one".to_string(), value - 1.0);
            value = 1.0;
        }
        let bures = bures_distance_from(value)
            .map_err(|e| format!("{route} route produced an invalid fidelity: {e}"))?;
        let report = Self {
            route,
            fidelity: value,
            bures_distance: bures,
            beta_star: None,
            cutoff: None,
            diagnostics,
        };
        report.check()?;
        Ok(report)
    }

    pub fn with_beta(mut self, beta: Complex64) -> Self {
        self.beta_star = Some(JsonComplex(beta));
        self
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn diagnostic(mut self, label: &str, value: f64) -> Self {
        self.diagnostics.insert(label.to_string(), value);
        self
    }

    /// Invariants every emitted report satisfies.
    pub fn check(&self) -> Result<(), String> {
        if !(self.fidelity > 0.0 && self.fidelity <= 1.0) {
            return Err(format!("{} fidelity {} outside (0, 1]", self.route, self.fidelity));
        }
        let expected = (2.0 * (1.0 - self.fidelity.sqrt())).sqrt();
        if (self.bures_distance - expected).abs() > BURES_TOLERANCE {
            return Err(format!(
                "{} Bures distance {} inconsistent with fidelity {}",
                self.route, self.bures_distance, self.fidelity
            ));
        }
        Ok(())
    }
}

/// Largest `|F_i − F_j|` over all pairs.
pub fn max_pairwise_discrepancy(reports: &[FidelityReport]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in reports.iter().enumerate() {
        for b in &reports[i + 1..] {
            worst = worst.max((a.fidelity - b.fidelity).abs());
        }
    }
    worst
}
