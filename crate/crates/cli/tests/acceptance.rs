//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL` line
//! (visible with `--nocapture`) before asserting.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use tcs_fidelity::closed_form::{bures_distance_from, optimal_beta, tcs_fidelity, thermal_fidelity};
use tcs_fidelity::fock_oracle::{
    cf_of_two_mode_vector, displaced_thermal_matrix, displacement_matrix, partial_trace_mode2,
    purification_vector, schmidt_purification, uhlmann_fidelity,
};
use tcs_fidelity::gaussian_overlap::pure_overlap;
use tcs_fidelity::optimizer::{maximize_overlap, OptimizerConfig};
use tcs_fidelity::states::{
    purification_cf, purification_gaussian_form, weyl_compose, DisplacedThermalState, PurificationSpec,
    ThermalParams,
};

const OCCUPANCIES: [f64; 5] = [0.0, 0.1, 0.5, 1.0, 2.0];

fn deltas() -> [Complex64; 4] {
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(2.0, 0.0),
    ]
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state(n: f64, alpha: Complex64) -> DisplacedThermalState {
    DisplacedThermalState::new(n, alpha).unwrap()
}

fn report(criterion: u32, pass: bool, detail: String) {
    println!("criterion {criterion}: {} {detail}", if pass { "PASS" } else { "FAIL" });
}

/// Pairs over the shared grid; state 1 sits at a fixed nonzero displacement.
fn grid_pairs() -> Vec<(DisplacedThermalState, DisplacedThermalState)> {
    let alpha1 = c(0.3, -0.2);
    let mut pairs = Vec::new();
    for &n1 in &OCCUPANCIES {
        for &n2 in &OCCUPANCIES {
            for d in deltas() {
                pairs.push((state(n1, alpha1), state(n2, alpha1 + d)));
            }
        }
    }
    pairs
}

#[test]
fn criterion_1_cross_route_agreement() {
    let started = Instant::now();
    let mut worst_all: f64 = 0.0;
    let mut worst_analytic: f64 = 0.0;
    for (s1, s2) in grid_pairs() {
        let closed = tcs_fidelity(&s1, &s2).unwrap().value();

        let beta = optimal_beta(&s1, &s2);
        let reference = PurificationSpec::of(&s1, c(0.0, 0.0)).unwrap();
        let other = PurificationSpec::of(&s2, beta).unwrap();
        let gaussian = pure_overlap(
            &purification_gaussian_form(&reference),
            &purification_gaussian_form(&other),
        )
        .unwrap()
        .value;

        let opt = maximize_overlap(&s1, &s2, &OptimizerConfig::default()).unwrap();
        assert!(opt.converged, "optimizer did not converge for {s1:?} {s2:?}");

        let oracle = uhlmann_fidelity(
            &displaced_thermal_matrix(&s1, 80).unwrap(),
            &displaced_thermal_matrix(&s2, 80).unwrap(),
        )
        .unwrap();

        let analytic = [closed, gaussian, opt.value];
        for (i, a) in analytic.iter().enumerate() {
            for b in &analytic[i + 1..] {
                worst_analytic = worst_analytic.max((a - b).abs());
            }
            worst_all = worst_all.max((a - oracle).abs());
        }
        worst_all = worst_all.max(worst_analytic);
    }
    let elapsed = started.elapsed();
    let pass = worst_all <= 1e-6 && worst_analytic <= 1e-12 && elapsed <= Duration::from_secs(120);
    report(
        1,
        pass,
        format!("max pairwise {worst_all:e}, analytic routes {worst_analytic:e}, {:.1}s", elapsed.as_secs_f64()),
    );
    assert!(pass);
}

#[test]
fn criterion_2_optimal_purification_recovery() {
    let mut worst: f64 = 0.0;
    let mut equal_temperature_nonzero = 0;
    for (s1, s2) in grid_pairs() {
        let opt = maximize_overlap(&s1, &s2, &OptimizerConfig::default()).unwrap();
        assert!(opt.converged);
        let analytic = optimal_beta(&s1, &s2);
        worst = worst.max((opt.beta_star - analytic).norm());
        if s1.mean_occupancy() == s2.mean_occupancy() && s1.mean_occupancy() > 0.0 && analytic.norm() > 0.0 {
            equal_temperature_nonzero += 1;
        }
    }
    // T₁ = T₂ still gives a temperature-dependent β̃ ≠ 0 when the displacements differ.
    let pass = worst <= 1e-8 && equal_temperature_nonzero > 0;
    report(
        2,
        pass,
        format!("max |β* − β̃| {worst:e}, {equal_temperature_nonzero} equal-temperature cases with β̃ ≠ 0"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_purification_is_pure() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(0.0..=10.0);
        let alpha = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let beta = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let spec = PurificationSpec::new(ThermalParams::new(n).unwrap(), alpha, beta).unwrap();
        worst = worst.max((purification_gaussian_form(&spec).determinant() - 1.0 / 16.0).abs());
    }
    let pass = worst <= 1e-12;
    report(3, pass, format!("max |det V − 1/16| {worst:e}"));
    assert!(pass);
}

#[test]
fn criterion_4_cf_chain() {
    let axis = [-0.7, 0.0, 0.7];
    let points: Vec<Complex64> = axis
        .iter()
        .flat_map(|&re| axis.iter().map(move |&im| c(re, im)))
        .collect();
    assert_eq!(points.len(), 9);
    assert!(points.iter().all(|l| l.norm() <= 1.0));

    let mut worst: f64 = 0.0;
    for &n in &[0.5, 1.0, 2.0] {
        for (alpha, beta) in [(c(0.0, 0.0), c(0.0, 0.0)), (c(0.4, -0.3), c(-0.5, 0.2))] {
            let spec = PurificationSpec::new(ThermalParams::new(n).unwrap(), alpha, beta).unwrap();
            let v = purification_vector(&spec, 60).unwrap();
            for &l1 in &points {
                for &l2 in &points {
                    let oracle = cf_of_two_mode_vector(&v, l1, l2).unwrap();
                    worst = worst.max((oracle - purification_cf(&spec, l1, l2)).norm());
                }
            }
        }
    }
    let pass = worst <= 1e-6;
    report(4, pass, format!("max |χ_oracle − χ| {worst:e} over 81 λ pairs"));
    assert!(pass);
}

#[test]
fn criterion_5_reduction_property() {
    let mut worst: f64 = 0.0;
    for &n in &[0.0, 0.5, 1.0, 2.0] {
        for alpha in [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 1.0), c(0.0, 2.0), c(1.2, -1.6)] {
            let s = state(n, alpha);
            let rho = displaced_thermal_matrix(&s, 60).unwrap();
            let reduced = partial_trace_mode2(&schmidt_purification(&s, c(0.0, 0.0), 60).unwrap());
            worst = worst.max(reduced.frobenius_distance(&rho));
        }
    }
    let pass = worst <= 1e-8;
    report(5, pass, format!("max Frobenius distance {worst:e}"));
    assert!(pass);
}

#[test]
fn criterion_6_spectrum_invariance() {
    let mut worst: f64 = 0.0;
    for &n in &[0.1, 0.5, 1.0, 2.0] {
        let thermal = ThermalParams::new(n).unwrap();
        for alpha in [c(0.0, 0.0), c(0.7, -0.4), c(1.5, 1.0)] {
            let rho = displaced_thermal_matrix(&state(n, alpha), 60).unwrap();
            let eig = rho.eigenvalues();
            for (j, &e) in eig.iter().take(20).enumerate() {
                worst = worst.max((e - thermal.eigenvalue(j)).abs());
            }
        }
    }
    let pass = worst <= 1e-8;
    report(6, pass, format!("max eigenvalue error {worst:e}"));
    assert!(pass);
}

#[test]
fn criterion_7_spot_values() {
    let half = thermal_fidelity(1.0, 0.0).unwrap().value();
    let e_inv = tcs_fidelity(&state(0.0, c(0.0, 0.0)), &state(0.0, c(1.0, 0.0)))
        .unwrap()
        .value();
    let zero = bures_distance_from(1.0).unwrap();
    let e_err = (e_inv - (-1.0f64).exp()).abs();
    let pass = half == 0.5 && e_err <= f64::EPSILON && zero == 0.0;
    report(7, pass, format!("F_T(1,0) = {half}, |F − e⁻¹| = {e_err:e}, D_B(1) = {zero}"));
    assert!(pass);
}

#[test]
fn criterion_8_weyl_composition() {
    let n = 60;
    let samples = [c(0.0, 0.0), c(1.5, 0.0), c(0.0, -1.5), c(1.0, 1.0), c(-0.8, 0.6)];
    let mut worst: f64 = 0.0;
    for &a in &samples {
        for &b in &samples {
            let product = displacement_matrix(a, n)
                .unwrap()
                .mul(&displacement_matrix(b, n).unwrap())
                .unwrap();
            let (phase, sum) = weyl_compose(a, b);
            let composed = displacement_matrix(sum, n).unwrap().scale(phase);
            worst = worst.max(product.block_deviation(&composed, n / 2));
        }
    }
    let pass = worst <= 1e-7;
    report(8, pass, format!("max block deviation {worst:e}"));
    assert!(pass);
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_tcsfid")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

/// Compares two runs against each other and against the stored golden file.
/// `UPDATE_GOLDEN=1` rewrites the file.
fn golden_check(name: &str, args: &[&str]) -> bool {
    let first = run_cli(args);
    let second = run_cli(args);
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, &first).unwrap();
    }
    let golden = std::fs::read(&path).unwrap_or_default();
    first == second && first == golden
}

#[test]
fn criterion_9_cli_determinism() {
    let fidelity = golden_check(
        "fidelity_all_routes.json",
        &[
            "fidelity", "--n1", "0.5", "--alpha1", "0.2,0", "--n2", "1.5", "--alpha2", "-0.4,0.9",
            "--all-routes",
        ],
    );
    let sweep = golden_check(
        "sweep.csv",
        &[
            "sweep", "--n1", "0,0.5,2", "--n2", "0.1,1", "--delta-re", "0,1", "--delta-im", "0,1",
            "--alpha1", "0.3,-0.2", "--routes", "closed-form,gaussian-overlap,purification-optimized",
        ],
    );
    let sweep_json = golden_check(
        "sweep.json",
        &["sweep", "--n1", "0,1", "--n2", "0.5", "--delta-re", "0.5", "--routes", "oracle", "--json"],
    );

    let text = String::from_utf8(run_cli(&[
        "fidelity", "--n1", "0", "--n2", "0", "--alpha2", "1,0", "--all-routes",
    ]))
    .unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let schema_ok = json["schema"] == 1
        && json["reports"].as_array().map(Vec::len) == Some(4)
        && json["max_pairwise_discrepancy"].as_f64().is_some_and(|d| d <= 1e-6);

    let pass = fidelity && sweep && sweep_json && schema_ok;
    report(
        9,
        pass,
        format!("fidelity golden {fidelity}, sweep golden {sweep}/{sweep_json}, schema {schema_ok}"),
    );
    assert!(pass);
}
