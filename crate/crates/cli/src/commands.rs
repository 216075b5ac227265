//! Argument definitions and subcommand handlers.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use tcs_fidelity::closed_form::{bures_distance_from, optimal_beta, tcs_fidelity};
use tcs_fidelity::fock_oracle::{cf_of_two_mode_vector, purification_vector};
use tcs_fidelity::optimizer::{maximize_overlap, Method, OptimizerConfig};
use tcs_fidelity::states::{purification_cf, DisplacedThermalState, PurificationSpec, ThermalParams};

use crate::args::{parse_complex, parse_grid_axis, parse_real, GridAxis};
use crate::report::{max_pairwise_discrepancy, FidelityReport, JsonComplex, Route, SCHEMA_VERSION};
use crate::routes::{evaluate, RouteOptions};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "tcsfid", version, about = "Fidelity between displaced thermal states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity between two displaced thermal states by one or all routes.
    Fidelity(FidelityArgs),
    /// Maximize the purification overlap over the ancilla displacement.
    Optimize(OptimizeArgs),
    /// Characteristic function of a purification on a λ grid (CSV).
    CfGrid(CfGridArgs),
    /// Fidelity over a parameter grid (CSV or JSON).
    Sweep(SweepArgs),
    /// Bures distance for a given fidelity.
    Bures(BuresArgs),
}

impl Cli {
    pub fn wants_json(&self) -> bool {
        match &self.command {
            Command::Fidelity(a) => !a.format.csv,
            Command::Optimize(_) => true,
            Command::CfGrid(_) => false,
            Command::Sweep(a) => a.format.json,
            Command::Bures(a) => !a.format.csv,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FormatArgs {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Mean occupancy of state 1.
    #[arg(long)]
    pub n1: Option<f64>,
    /// ħω/k_BT of state 1, converted to a mean occupancy.
    #[arg(long)]
    pub temp_ratio1: Option<f64>,
    /// Displacement of state 1 as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub alpha1: Complex64,
    /// Mean occupancy of state 2.
    #[arg(long)]
    pub n2: Option<f64>,
    /// ħω/k_BT of state 2, converted to a mean occupancy.
    #[arg(long)]
    pub temp_ratio2: Option<f64>,
    /// Displacement of state 2 as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub alpha2: Complex64,
}

#[derive(Debug, Clone, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_enum, default_value_t = Route::ClosedForm)]
    pub route: Route,
    /// Evaluate every route and report the largest pairwise discrepancy.
    #[arg(long)]
    pub all_routes: bool,
    /// Fock cutoff for the oracle route.
    #[arg(long, default_value_t = tcs_fidelity::fock_oracle::DEFAULT_CUTOFF)]
    pub cutoff: usize,
    /// Largest discrepancy tolerated with `--all-routes` before exiting 1.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Newton,
    NelderMead,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Newton => Method::Newton,
            MethodArg::NelderMead => Method::NelderMead,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Newton)]
    pub method: MethodArg,
    /// Step tolerance on β.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub gradient_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub initial_beta: Complex64,
}

#[derive(Debug, Clone, Args)]
pub struct CfGridArgs {
    /// Mean occupancy of the purification.
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long)]
    pub temp_ratio: Option<f64>,
    /// Mode-1 displacement `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub alpha: Complex64,
    /// Mode-2 displacement `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub beta: Complex64,
    /// Re λ₁ grid as `value` or `start:stop:count`.
    #[arg(long, value_parser = parse_grid_axis, allow_hyphen_values = true, default_value = "0")]
    pub re1: GridAxis,
    #[arg(long, value_parser = parse_grid_axis, allow_hyphen_values = true, default_value = "0")]
    pub im1: GridAxis,
    #[arg(long, value_parser = parse_grid_axis, allow_hyphen_values = true, default_value = "0")]
    pub re2: GridAxis,
    #[arg(long, value_parser = parse_grid_axis, allow_hyphen_values = true, default_value = "0")]
    pub im2: GridAxis,
    /// Also evaluate the CF of the truncated Fock purification at this cutoff.
    #[arg(long)]
    pub oracle_check: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma-separated mean occupancies of state 1.
    #[arg(long, value_parser = parse_real, value_delimiter = ',', required = true)]
    pub n1: Vec<f64>,
    #[arg(long, value_parser = parse_real, value_delimiter = ',', required = true)]
    pub n2: Vec<f64>,
    /// Displacement of state 1; state 2 sits at `alpha1 + delta`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub alpha1: Complex64,
    /// Comma-separated real parts of `α₂ − α₁`.
    #[arg(long, value_parser = parse_real, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub delta_re: Vec<f64>,
    #[arg(long, value_parser = parse_real, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub delta_im: Vec<f64>,
    /// Comma-separated routes.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "closed-form")]
    pub routes: Vec<Route>,
    #[arg(long, default_value_t = tcs_fidelity::fock_oracle::DEFAULT_CUTOFF)]
    pub cutoff: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BuresArgs {
    #[arg(long)]
    pub fidelity: f64,
    #[command(flatten)]
    pub format: FormatArgs,
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Fidelity(a) => cmd_fidelity(a, out, err),
        Command::Optimize(a) => cmd_optimize(a, out, err),
        Command::CfGrid(a) => cmd_cf_grid(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Bures(a) => cmd_bures(a, out),
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Resolves `--nX` / `--temp-ratioX`; a direct occupancy wins with a warning.
fn resolve_thermal(
    n: Option<f64>,
    ratio: Option<f64>,
    label: &str,
    err: &mut dyn Write,
) -> Result<ThermalParams, CliError> {
    match (n, ratio) {
        (Some(n), Some(_)) => {
            writeln!(err, "warning: both --n{label} and --temp-ratio{label} given; using --n{label}")?;
            ThermalParams::new(n).map_err(usage)
        }
        (Some(n), None) => ThermalParams::new(n).map_err(usage),
        (None, Some(r)) => ThermalParams::from_energy_ratio(r).map_err(usage),
        (None, None) => Err(CliError::Usage(format!(
            "one of --n{label} or --temp-ratio{label} is required"
        ))),
    }
}

fn resolve_pair(
    p: &PairArgs,
    err: &mut dyn Write,
) -> Result<(DisplacedThermalState, DisplacedThermalState), CliError> {
    let t1 = resolve_thermal(p.n1, p.temp_ratio1, "1", err)?;
    let t2 = resolve_thermal(p.n2, p.temp_ratio2, "2", err)?;
    Ok((
        DisplacedThermalState::with_thermal(t1, p.alpha1).map_err(usage)?,
        DisplacedThermalState::with_thermal(t2, p.alpha2).map_err(usage)?,
    ))
}

#[derive(Serialize)]
struct Inputs {
    n1: f64,
    alpha1: JsonComplex,
    n2: f64,
    alpha2: JsonComplex,
}

impl Inputs {
    fn of(s1: &DisplacedThermalState, s2: &DisplacedThermalState) -> Self {
        Self {
            n1: s1.mean_occupancy(),
            alpha1: JsonComplex(s1.displacement),
            n2: s2.mean_occupancy(),
            alpha2: JsonComplex(s2.displacement),
        }
    }
}

#[derive(Serialize)]
struct SingleOutput<'a> {
    schema: u32,
    inputs: Inputs,
    #[serde(flatten)]
    report: &'a FidelityReport,
}

#[derive(Serialize)]
struct AllRoutesOutput<'a> {
    schema: u32,
    inputs: Inputs,
    reports: &'a [FidelityReport],
    max_pairwise_discrepancy: f64,
    tolerance: f64,
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Shortest round-trip decimal, switching to exponent form for tiny or huge values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt_to_csv<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_report_csv(out: &mut dyn Write, reports: &[FidelityReport]) -> Result<(), CliError> {
    writeln!(out, "route,fidelity,bures_distance,beta_re,beta_im,cutoff")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.route,
            num(r.fidelity),
            num(r.bures_distance),
            opt_to_csv(r.beta_star.map(|b| num(b.0.re))),
            opt_to_csv(r.beta_star.map(|b| num(b.0.im))),
            opt_to_csv(r.cutoff),
        )?;
    }
    Ok(())
}

fn route_options(cutoff: usize, max_iters: usize) -> Result<RouteOptions, CliError> {
    if cutoff == 0 {
        return Err(CliError::Usage("--cutoff must be at least 1".into()));
    }
    if max_iters == 0 {
        return Err(CliError::Usage("--max-iters must be at least 1".into()));
    }
    Ok(RouteOptions {
        cutoff,
        optimizer: OptimizerConfig {
            max_iters,
            ..OptimizerConfig::default()
        },
    })
}

fn flush_warnings(err: &mut dyn Write, warnings: &[String]) -> Result<(), CliError> {
    for w in warnings {
        writeln!(err, "warning: {w}")?;
    }
    Ok(())
}

pub fn cmd_fidelity(a: &FidelityArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (s1, s2) = resolve_pair(&a.pair, err)?;
    let options = route_options(a.cutoff, a.max_iters)?;
    if !(a.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let mut warnings = Vec::new();
    let routes: Vec<Route> = if a.all_routes { Route::ALL.to_vec() } else { vec![a.route] };
    let reports = routes
        .iter()
        .map(|&r| evaluate(r, &s1, &s2, &options, &mut warnings))
        .collect::<Result<Vec<_>, _>>()?;
    flush_warnings(err, &warnings)?;

    if !a.all_routes {
        if a.format.csv {
            return write_report_csv(out, &reports);
        }
        return write_json(
            out,
            &SingleOutput {
                schema: SCHEMA_VERSION,
                inputs: Inputs::of(&s1, &s2),
                report: &reports[0],
            },
        );
    }

    let discrepancy = max_pairwise_discrepancy(&reports);
    if a.format.csv {
        write_report_csv(out, &reports)?;
        writeln!(out, "# max_pairwise_discrepancy={}", num(discrepancy))?;
    } else {
        write_json(
            out,
            &AllRoutesOutput {
                schema: SCHEMA_VERSION,
                inputs: Inputs::of(&s1, &s2),
                reports: &reports,
                max_pairwise_discrepancy: discrepancy,
                tolerance: a.tol,
            },
        )?;
    }
    if discrepancy > a.tol {
        return Err(CliError::Breach(format!(
            "routes disagree by {discrepancy:e} (tolerance {:e})",
            a.tol
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    schema: u32,
    inputs: Inputs,
    #[serde(flatten)]
    report: &'a FidelityReport,
    analytic_beta: JsonComplex,
    beta_deviation: f64,
    closed_form_fidelity: f64,
    converged: bool,
    method: Method,
}

pub fn cmd_optimize(a: &OptimizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (s1, s2) = resolve_pair(&a.pair, err)?;
    let config = OptimizerConfig {
        method: a.method.into(),
        beta_tol: a.tol,
        gradient_tol: a.gradient_tol,
        max_iters: a.max_iters,
        initial_beta: a.initial_beta,
        ..OptimizerConfig::default()
    };
    let result = maximize_overlap(&s1, &s2, &config).map_err(usage)?;
    let analytic = optimal_beta(&s1, &s2);
    let closed = tcs_fidelity(&s1, &s2).map_err(|e| CliError::Numerical(e.to_string()))?;
    let report = FidelityReport::new(Route::PurificationOptimized, result.value)
        .map_err(CliError::Numerical)?
        .with_beta(result.beta_star)
        .diagnostic("gradient_norm", result.gradient_norm)
        .diagnostic("iterations", result.iterations as f64);
    write_json(
        out,
        &OptimizeOutput {
            schema: SCHEMA_VERSION,
            inputs: Inputs::of(&s1, &s2),
            report: &report,
            analytic_beta: JsonComplex(analytic),
            beta_deviation: (result.beta_star - analytic).norm(),
            closed_form_fidelity: closed.value(),
            converged: result.converged,
            method: result.method,
        },
    )?;
    if !result.converged {
        return Err(CliError::Breach(format!(
            "optimizer did not converge after {} iterations (gradient norm {:e})",
            result.iterations, result.gradient_norm
        )));
    }
    Ok(())
}

pub fn cmd_cf_grid(a: &CfGridArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let thermal = resolve_thermal(a.n, a.temp_ratio, "", err)?;
    let spec = PurificationSpec::new(thermal, a.alpha, a.beta).map_err(usage)?;
    let oracle = match a.oracle_check {
        Some(0) => return Err(CliError::Usage("--oracle-check cutoff must be at least 1".into())),
        Some(n) => Some(purification_vector(&spec, n).map_err(|e| CliError::Numerical(e.to_string()))?),
        None => None,
    };

    write!(out, "re_l1,im_l1,re_l2,im_l2,re_chi,im_chi")?;
    if oracle.is_some() {
        write!(out, ",re_oracle,im_oracle,abs_dev")?;
    }
    writeln!(out)?;

    let mut worst: f64 = 0.0;
    for &r1 in &a.re1.points() {
        for &i1 in &a.im1.points() {
            for &r2 in &a.re2.points() {
                for &i2 in &a.im2.points() {
                    let (l1, l2) = (Complex64::new(r1, i1), Complex64::new(r2, i2));
                    let chi = purification_cf(&spec, l1, l2);
                    write!(
                        out,
                        "{},{},{},{},{},{}",
                        num(r1),
                        num(i1),
                        num(r2),
                        num(i2),
                        num(chi.re),
                        num(chi.im)
                    )?;
                    if let Some(v) = &oracle {
                        let o = cf_of_two_mode_vector(v, l1, l2).map_err(|e| CliError::Numerical(e.to_string()))?;
                        let dev = (o - chi).norm();
                        worst = worst.max(dev);
                        write!(out, ",{},{},{}", num(o.re), num(o.im), num(dev))?;
                    }
                    writeln!(out)?;
                }
            }
        }
    }
    if oracle.is_some() {
        writeln!(out, "# max_abs_deviation={}", num(worst))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    n1: f64,
    n2: f64,
    delta_re: f64,
    delta_im: f64,
    route: Route,
    fidelity: f64,
    bures_distance: f64,
    discrepancy: f64,
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    schema: u32,
    rows: &'a [SweepRow],
}

fn sorted_unique(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if a.n1.is_empty() || a.n2.is_empty() {
        return Err(CliError::Usage("--n1 and --n2 lists are required".into()));
    }
    let options = route_options(a.cutoff, a.max_iters)?;
    let mut routes = a.routes.clone();
    routes.sort();
    routes.dedup();

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for &n1 in &sorted_unique(&a.n1) {
        for &n2 in &sorted_unique(&a.n2) {
            for &dr in &sorted_unique(&a.delta_re) {
                for &di in &sorted_unique(&a.delta_im) {
                    let s1 = DisplacedThermalState::new(n1, a.alpha1).map_err(usage)?;
                    let s2 = DisplacedThermalState::new(n2, a.alpha1 + Complex64::new(dr, di)).map_err(usage)?;
                    let closed = evaluate(Route::ClosedForm, &s1, &s2, &options, &mut warnings)?;
                    for &route in &routes {
                        let report = if route == Route::ClosedForm {
                            closed.clone()
                        } else {
                            evaluate(route, &s1, &s2, &options, &mut warnings)?
                        };
                        rows.push(SweepRow {
                            n1,
                            n2,
                            delta_re: dr,
                            delta_im: di,
                            route,
                            fidelity: report.fidelity,
                            bures_distance: report.bures_distance,
                            discrepancy: (report.fidelity - closed.fidelity).abs(),
                        });
                    }
                }
            }
        }
    }
    flush_warnings(err, &warnings)?;

    if a.format.json {
        return write_json(
            out,
            &SweepOutput {
                schema: SCHEMA_VERSION,
                rows: &rows,
            },
        );
    }
    writeln!(out, "n1,n2,delta_re,delta_im,route,fidelity,bures_distance,discrepancy")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(r.n1),
            num(r.n2),
            num(r.delta_re),
            num(r.delta_im),
            r.route,
            num(r.fidelity),
            num(r.bures_distance),
            num(r.discrepancy)
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct BuresOutput {
    schema: u32,
    fidelity: f64,
    bures_distance: f64,
}

pub fn cmd_bures(a: &BuresArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let d = bures_distance_from(a.fidelity).map_err(usage)?;
    if a.format.csv {
        writeln!(out, "fidelity,bures_distance")?;
        writeln!(out, "{},{}", num(a.fidelity), num(d))?;
        return Ok(());
    }
    write_json(
        out,
        &BuresOutput {
            schema: SCHEMA_VERSION,
            fidelity: a.fidelity,
            bures_distance: d,
        },
    )
}
