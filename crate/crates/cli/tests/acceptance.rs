//! Acceptance suite: one test per criterion, each printing a pass line with
//! the measured quantities. Run with `cargo test -p ballmin-cli --test
//! acceptance -- --nocapture` to see every line.

use std::path::PathBuf;
use std::process::Command;

use ballmin::certify::{
    certify_global_minimizer, check_convexification, check_strict_concavity, BallSampling,
    CertificateMode, CertificateQuery, Verdict,
};
use ballmin::dual::curvature_hypotheses;
use ballmin::objective::{Monomial, PolynomialFunction};
use ballmin::oracle::{compare_candidates, global_min_grid, GridSpec};
use ballmin::problems::{axis_quadratic_2d, counterexample_quartic, shifted_parabola};
use ballmin::stationary::{multistart_solve, MultistartConfig};
use ballmin::validate::validate_problem;
use ballmin::Polynomial64;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ballmin"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform(state: &mut u64, lo: f64, hi: f64) -> f64 {
    let u = (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64;
    lo + (hi - lo) * u
}

/// Every exponent vector over `n` variables with total degree in [1, max].
fn exponent_basis(n: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut basis = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for partial in &basis {
            let used: u32 = partial.iter().sum();
            for e in 0..=(max_degree - used) {
                let mut v = partial.clone();
                v.push(e);
                next.push(v);
            }
        }
        basis = next;
    }
    basis.retain(|v| v.iter().sum::<u32>() >= 1);
    basis
}

fn random_polynomial(state: &mut u64, n: usize, max_degree: u32) -> Polynomial64 {
    let terms: Vec<Monomial<f64>> = exponent_basis(n, max_degree)
        .into_iter()
        .map(|p| Monomial::new(uniform(state, -1.0, 1.0), p))
        .collect();
    PolynomialFunction::new(n, terms).unwrap()
}

/// Strictly concave random quadratic in two variables:
/// `-x'Ax/2 + b'x` with `A = R'R + 0.1 I`.
fn random_concave_quadratic(state: &mut u64) -> Polynomial64 {
    let r = [
        [uniform(state, -1.0, 1.0), uniform(state, -1.0, 1.0)],
        [uniform(state, -1.0, 1.0), uniform(state, -1.0, 1.0)],
    ];
    let a11 = r[0][0] * r[0][0] + r[1][0] * r[1][0] + 0.1;
    let a12 = r[0][0] * r[0][1] + r[1][0] * r[1][1];
    let a22 = r[0][1] * r[0][1] + r[1][1] * r[1][1] + 0.1;
    let b = [uniform(state, -1.0, 1.0), uniform(state, -1.0, 1.0)];
    PolynomialFunction::new(
        2,
        [
            Monomial::new(-0.5 * a11, vec![2, 0]),
            Monomial::new(-a12, vec![1, 1]),
            Monomial::new(-0.5 * a22, vec![0, 2]),
            Monomial::new(b[0], vec![1, 0]),
            Monomial::new(b[1], vec![0, 1]),
        ],
    )
    .unwrap()
}

#[test]
fn criterion_01_builtin_example_reproduces_reference_values() {
    let output = bin().args(["example", "--json"]).output().expect("binary runs");
    assert!(output.status.success(), "example exited with {:?}", output.status);
    let run: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();

    let pairs = run["report"]["stationary"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 2, "multistart must find exactly 2 pairs");
    let x0 = pairs[0]["x"][0].as_f64().unwrap();
    let rho0 = pairs[0]["rho"].as_f64().unwrap();
    let x1 = pairs[1]["x"][0].as_f64().unwrap();
    let rho1 = pairs[1]["rho"].as_f64().unwrap();
    assert!((x0 + 1.0).abs() <= 1e-8);
    assert!((rho0 - 4.0).abs() <= 1e-8);
    assert!((x1 - 1.0).abs() <= 1e-8);
    assert!((rho1 - 44.0 / 5.0).abs() <= 1e-8);

    let p = counterexample_quartic::<f64>();
    let v_minus = p.eval(&[-1.0]).unwrap();
    let v_plus = p.eval(&[1.0]).unwrap();
    assert!((v_minus + 3.0).abs() <= 1e-12);
    assert!((v_plus + 7.0 / 5.0).abs() <= 1e-12);

    assert_eq!(run["all_passed"], serde_json::Value::Bool(true));
    println!(
        "PASS criterion 1: pairs ({x0}, {rho0}) and ({x1}, {rho1}); \
         values {v_minus} and {v_plus}"
    );
}

#[test]
fn criterion_02_curvature_hypotheses_on_the_quartic() {
    let p = counterexample_quartic::<f64>();
    let set = multistart_solve(&p, &MultistartConfig::for_dimension(1)).unwrap();
    let report = curvature_hypotheses(&p, &set).unwrap();
    assert_eq!(report.pairs.len(), 2);

    let det0 = report.pairs[0].det_shifted_hessian;
    let det1 = report.pairs[1].det_shifted_hessian;
    assert!(report.pairs[0].det_nonzero && det0 != 0.0);
    assert!(report.pairs[1].det_nonzero && det1 != 0.0);
    // shifted hessians are negative: -4/5 and -76/5
    assert!(det0 < 0.0 && (det0 + 4.0 / 5.0).abs() <= 1e-8);
    assert!(det1 < 0.0 && (det1 + 76.0 / 5.0).abs() <= 1e-8);

    let c0 = report.pairs[0].curvature.unwrap();
    let c1 = report.pairs[1].curvature.unwrap();
    assert!((c0 - 5.0 / 4.0).abs() <= 1e-8);
    assert!((c1 - 5.0 / 76.0).abs() <= 1e-8);
    assert!(report.all_hold);
    println!("PASS criterion 2: curvatures {c0} and {c1}, dets {det0} and {det1}, all hold");
}

#[test]
fn criterion_03_refutation_record() {
    let p = counterexample_quartic::<f64>();
    let set = multistart_solve(&p, &MultistartConfig::for_dimension(1)).unwrap();
    let oracle = global_min_grid(
        &p,
        &GridSpec { points_per_axis: 20_001, dimension_limit: 3 },
    )
    .unwrap();
    assert!((oracle.min_value + 3.0).abs() <= 1e-6);
    assert!((oracle.argmin[0] + 1.0).abs() <= 1e-6);

    let comparison = compare_candidates(&p, &set, &oracle, 1e-3).unwrap();
    assert!((comparison.designee_value + 7.0 / 5.0).abs() <= 1e-6);
    let refutation = comparison.refutation.expect("designee must mismatch");
    assert!((refutation.gap - 8.0 / 5.0).abs() <= 1e-6);

    // the analysis report flags the criterion as refuted
    let output = bin()
        .args(["analyze", fixture("counterexample_quartic.json").to_str().unwrap(), "--json"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(!report["refutation"].is_null(), "report must flag the refutation");
    assert_eq!(report["refutation"]["hypotheses_hold"], serde_json::Value::Bool(true));
    println!(
        "PASS criterion 3: oracle {} at {}, designee {}, gap {}",
        oracle.min_value, oracle.argmin[0], comparison.designee_value, refutation.gap
    );
}

#[test]
fn criterion_04_certificate_refuted_at_largest_multiplier() {
    let p = counterexample_quartic::<f64>();
    let r = check_convexification(
        &p,
        44.0 / 5.0,
        &BallSampling::for_dimension(1),
        CertificateMode::Strict,
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    assert!(r.extreme_eigenvalue <= -76.0 / 5.0 + 1e-6);
    println!(
        "PASS criterion 4: refuted with witness eigenvalue {} at {:?}",
        r.extreme_eigenvalue, r.witness_point
    );
}

#[test]
fn criterion_05_positive_case_certified_and_confirmed() {
    let p = shifted_parabola::<f64>();
    let set = multistart_solve(&p, &MultistartConfig::for_dimension(1)).unwrap();
    assert_eq!(set.pairs.len(), 2);
    assert!((set.pairs[0].x[0] + 1.0).abs() <= 1e-8 && (set.pairs[0].rho - 1.0).abs() <= 1e-8);
    assert!((set.pairs[1].x[0] - 1.0).abs() <= 1e-8 && (set.pairs[1].rho - 3.0).abs() <= 1e-8);

    let outcome = certify_global_minimizer(
        &p,
        &set,
        &BallSampling::for_dimension(1),
        CertificateMode::Strict,
        None,
    )
    .unwrap();
    assert_eq!(outcome.certificate.verdict, Verdict::CertifiedExact);
    assert!((outcome.certificate.extreme_eigenvalue - 1.0).abs() <= 1e-12);

    let designated = outcome.designated.unwrap();
    let oracle = global_min_grid(&p, &GridSpec::for_dimension(1)).unwrap();
    assert!((designated.representative_x[0] - 1.0).abs() <= 1e-8);
    assert!((designated.value - oracle.min_value).abs() <= 1e-6);
    println!(
        "PASS criterion 5: certified_exact with eigenvalue {}, designee value {} vs oracle {}",
        outcome.certificate.extreme_eigenvalue, designated.value, oracle.min_value
    );
}

#[test]
fn criterion_06_relaxed_semidefinite_case() {
    let p = axis_quadratic_2d::<f64>();
    let set = multistart_solve(&p, &MultistartConfig::for_dimension(2)).unwrap();
    let query =
        CertificateQuery { x_bar: vec![0.0, 1.0], rho_bar: 4.0, mode: CertificateMode::Relaxed };
    let outcome = certify_global_minimizer(
        &p,
        &set,
        &BallSampling::relaxed_for_dimension(2),
        CertificateMode::Relaxed,
        Some(&query),
    )
    .unwrap();
    assert!(outcome.certificate.verdict.is_certified());
    assert!(outcome.certificate.extreme_eigenvalue.abs() <= 1e-12);

    let designated = outcome.designated.unwrap();
    assert_eq!(designated.pair_indices.len(), 2, "designates the (0, +-1) group");
    for &i in &designated.pair_indices {
        let x = &set.pairs[i].x;
        assert!(x[0].abs() <= 1e-8 && (x[1].abs() - 1.0).abs() <= 1e-8);
    }

    let oracle = global_min_grid(&p, &GridSpec::for_dimension(2)).unwrap();
    let tol = 10.0 * oracle.grid_resolution;
    assert!((designated.value - oracle.min_value).abs() <= tol);
    assert!((oracle.min_value + 2.0).abs() <= tol);
    println!(
        "PASS criterion 6: semidefinite certificate (eigenvalue {}), designee value {} vs oracle {}",
        outcome.certificate.extreme_eigenvalue, designated.value, oracle.min_value
    );
}

#[test]
fn criterion_07_strict_concavity_extreme_eigenvalue() {
    let p = counterexample_quartic::<f64>();
    let r = check_strict_concavity(&p, &BallSampling::for_dimension(1)).unwrap();
    assert!(r.verdict.is_certified());
    assert!(r.extreme_eigenvalue >= -12.0 / 25.0 - 1e-6);
    assert!(r.extreme_eigenvalue <= -12.0 / 25.0 + 1e-3);
    println!(
        "PASS criterion 7: max hessian eigenvalue {} (reference -12/25 = {})",
        r.extreme_eigenvalue,
        -12.0 / 25.0
    );
}

#[test]
fn criterion_08_finite_difference_property_suite() {
    let mut state = 0x8A5C_D13Eu64;
    let mut pair_checks = 0usize;
    for round in 0..50 {
        let n = 1 + round % 3;
        let poly = random_polynomial(&mut state, n, 4);
        let report = validate_problem(&poly, &MultistartConfig::for_dimension(n)).unwrap();
        for check in &report.checks {
            assert!(
                check.passed,
                "round {round} (n = {n}): {} failed with error {} > tolerance {}",
                check.name, check.error, check.tolerance
            );
            if check.name.contains("pair") {
                pair_checks += 1;
            }
        }
    }
    assert!(pair_checks >= 50, "expected plenty of per-pair checks, got {pair_checks}");
    println!("PASS criterion 8: 50 random objectives validated, {pair_checks} per-pair checks");
}

#[test]
fn criterion_09_quadratic_oracle_equivalence() {
    let mut state = 0x0DD_BA11_u64;
    let grid = GridSpec { points_per_axis: 401, dimension_limit: 3 };
    let mut worst_gap = 0.0f64;
    for round in 0..100 {
        let poly = random_concave_quadratic(&mut state);
        let set = multistart_solve(&poly, &MultistartConfig::for_dimension(2)).unwrap();
        assert!(!set.is_empty(), "round {round}: no stationary pairs found");
        let oracle = global_min_grid(&poly, &grid).unwrap();
        let comparison = compare_candidates(&poly, &set, &oracle, 1e-3).unwrap();
        let best = comparison.pair_values[comparison.best_pair_index];
        let gap = (best - oracle.min_value).abs();
        assert!(gap <= 1e-3, "round {round}: best pair {best} vs oracle {} (gap {gap})", oracle.min_value);
        worst_gap = worst_gap.max(gap);
    }
    println!("PASS criterion 9: 100 concave quadratics, worst value gap {worst_gap:.3e}");
}

#[test]
fn criterion_10_byte_identical_reports() {
    let run = || {
        bin()
            .args([
                "analyze",
                fixture("counterexample_quartic.json").to_str().unwrap(),
                "--json",
                "--seed",
                "7",
            ])
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout, "machine-readable reports must be byte-identical");
    assert!(!first.stdout.is_empty());
    println!("PASS criterion 10: identical {}-byte reports across runs", first.stdout.len());
}
