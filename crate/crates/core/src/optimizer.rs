//! Numerical maximization of the purification overlap over the ancilla
//! displacement `β`.
//!
//! The search never consults the analytic optimum. It sees only the objective
//! `ln P(β)`, a strictly concave quadratic in `(Re β, Im β)`, through function
//! values; derivatives are central differences.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::overlap_log_probability;
use crate::error::{Error, Result};
use crate::states::{DisplacedThermalState, PurificationSpec};

/// Newton iterations needed on an exactly quadratic objective: one step to
/// land on the optimum, one to confirm it.
pub const NEWTON_QUADRATIC_ITERATION_BOUND: usize = 3;

const GRADIENT_STEP: f64 = 1e-4;
const HESSIAN_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Damped Newton with a finite-difference 2×2 Hessian.
    Newton,
    /// Derivative-free simplex search.
    NelderMead,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Step-length tolerance on `β`.
    pub beta_tol: f64,
    /// Tolerance on the spread of objective values (Nelder–Mead).
    pub value_tol: f64,
    /// Gradient norm required to report convergence.
    pub gradient_tol: f64,
    pub max_iters: usize,
    pub initial_beta: Complex64,
    /// Edge length of the initial Nelder–Mead simplex.
    pub simplex_scale: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Newton,
            beta_tol: 1e-8,
            value_tol: 1e-10,
            gradient_tol: 1e-6,
            max_iters: 200,
            initial_beta: Complex64::new(0.0, 0.0),
            simplex_scale: 1.0,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("beta_tol", self.beta_tol),
            ("value_tol", self.value_tol),
            ("gradient_tol", self.gradient_tol),
            ("simplex_scale", self.simplex_scale),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain {
                    name,
                    requirement: "positive and finite",
                    value: v,
                });
            }
        }
        if self.max_iters == 0 {
            return Err(Error::Domain {
                name: "max_iters",
                requirement: "at least 1",
                value: 0.0,
            });
        }
        if !(self.initial_beta.re.is_finite() && self.initial_beta.im.is_finite()) {
            return Err(Error::Domain {
                name: "initial_beta",
                requirement: "finite",
                value: self.initial_beta.re,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub beta_star: Complex64,
    /// Overlap probability at `beta_star`.
    pub value: f64,
    pub log_value: f64,
    pub initial_log_value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Finite-difference gradient norm of the log objective at `beta_star`.
    pub gradient_norm: f64,
    pub method: Method,
}

/// `ln P(β)` for the reference purification of `s1` against the purification
/// of `s2` with ancilla displacement `beta`.
pub fn objective(s1: &DisplacedThermalState, s2: &DisplacedThermalState, beta: Complex64) -> Result<f64> {
    let reference = PurificationSpec::of(s1, Complex64::new(0.0, 0.0))?;
    let other = PurificationSpec::of(s2, beta)?;
    overlap_log_probability(&reference, &other)
}

struct Objective<'a> {
    s1: &'a DisplacedThermalState,
    s2: &'a DisplacedThermalState,
}

impl Objective<'_> {
    fn at(&self, p: [f64; 2]) -> Result<f64> {
        objective(self.s1, self.s2, Complex64::new(p[0], p[1]))
    }

    fn gradient(&self, p: [f64; 2]) -> Result<[f64; 2]> {
        let h = GRADIENT_STEP * (1.0 + p[0].hypot(p[1]));
        let mut g = [0.0; 2];
        for (i, gi) in g.iter_mut().enumerate() {
            let (mut plus, mut minus) = (p, p);
            plus[i] += h;
            minus[i] -= h;
            *gi = (self.at(plus)? - self.at(minus)?) / (2.0 * h);
        }
        Ok(g)
    }

    fn hessian(&self, p: [f64; 2]) -> Result<[[f64; 2]; 2]> {
        let h = HESSIAN_STEP * (1.0 + p[0].hypot(p[1]));
        let f0 = self.at(p)?;
        let shifted = |dx: f64, dy: f64| self.at([p[0] + dx, p[1] + dy]);
        let hxx = (shifted(h, 0.0)? - 2.0 * f0 + shifted(-h, 0.0)?) / (h * h);
        let hyy = (shifted(0.0, h)? - 2.0 * f0 + shifted(0.0, -h)?) / (h * h);
        let hxy = (shifted(h, h)? - shifted(h, -h)? - shifted(-h, h)? + shifted(-h, -h)?) / (4.0 * h * h);
        Ok([[hxx, hxy], [hxy, hyy]])
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Maximizes the overlap probability over `β`.
///
/// Non-convergence is not an error: the result carries `converged = false`
/// with the diagnostics of the last iterate.
pub fn maximize_overlap(
    s1: &DisplacedThermalState,
    s2: &DisplacedThermalState,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    let obj = Objective { s1, s2 };
    let start = [config.initial_beta.re, config.initial_beta.im];
    let initial_log_value = obj.at(start)?;
    let (point, iterations, step_converged) = match config.method {
        Method::Newton => newton(&obj, start, config)?,
        Method::NelderMead => nelder_mead(&obj, start, config)?,
    };
    let log_value = obj.at(point)?;
    let gradient_norm = norm(obj.gradient(point)?);
    Ok(OptimizationResult {
        beta_star: Complex64::new(point[0], point[1]),
        value: log_value.exp(),
        log_value,
        initial_log_value,
        iterations,
        converged: step_converged && gradient_norm <= config.gradient_tol,
        gradient_norm,
        method: config.method,
    })
}

fn newton(obj: &Objective, start: [f64; 2], config: &OptimizerConfig) -> Result<([f64; 2], usize, bool)> {
    let mut p = start;
    let mut f = obj.at(p)?;
    for iter in 1..=config.max_iters {
        let g = obj.gradient(p)?;
        let h = obj.hessian(p)?;
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        // Newton direction solves H d = −g; fall back to ascent if H is not negative definite.
        let dir = if h[0][0] < 0.0 && det > 0.0 {
            [
                -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
                -(-h[1][0] * g[0] + h[0][0] * g[1]) / det,
            ]
        } else {
            let scale = h[0][0].abs().max(h[1][1].abs()).max(1.0);
            [g[0] / scale, g[1] / scale]
        };
        let mut t = 1.0;
        let mut next = [p[0] + dir[0], p[1] + dir[1]];
        let mut f_next = obj.at(next)?;
        while f_next < f && t > 1e-12 {
            t *= 0.5;
            next = [p[0] + t * dir[0], p[1] + t * dir[1]];
            f_next = obj.at(next)?;
        }
        let step = t * norm(dir);
        if f_next >= f {
            p = next;
            f = f_next;
        }
        if step <= config.beta_tol && norm(obj.gradient(p)?) <= config.gradient_tol {
            return Ok((p, iter, true));
        }
    }
    Ok((p, config.max_iters, false))
}

fn nelder_mead(obj: &Objective, start: [f64; 2], config: &OptimizerConfig) -> Result<([f64; 2], usize, bool)> {
    // Minimizes −ln P with the standard reflection/expansion/contraction/shrink moves.
    let cost = |p: [f64; 2]| obj.at(p).map(|v| -v);
    let h = config.simplex_scale;
    let mut simplex = [start, [start[0] + h, start[1]], [start[0], start[1] + h]];
    let mut values = [cost(simplex[0])?, cost(simplex[1])?, cost(simplex[2])?];

    for iter in 1..=config.max_iters {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let diameter = (1..3)
            .map(|i| norm([simplex[i][0] - simplex[0][0], simplex[i][1] - simplex[0][1]]))
            .fold(0.0, f64::max);
        let spread = values[2] - values[0];
        if diameter <= config.beta_tol || spread <= config.value_tol * f64::EPSILON * (1.0 + values[0].abs()) {
            return Ok((simplex[0], iter, true));
        }

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let along = |coef: f64| {
            [
                centroid[0] + coef * (simplex[2][0] - centroid[0]),
                centroid[1] + coef * (simplex[2][1] - centroid[1]),
            ]
        };
        let reflected = along(-1.0);
        let fr = cost(reflected)?;
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = cost(expanded)?;
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let (contracted, fc) = if fr < values[2] {
                let p = along(-0.5);
                (p, cost(p)?)
            } else {
                let p = along(0.5);
                (p, cost(p)?)
            };
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1]),
                    ];
                    values[i] = cost(simplex[i])?;
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Ok((simplex[best], config.max_iters, false))
}
