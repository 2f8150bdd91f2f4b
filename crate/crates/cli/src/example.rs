//! The built-in counterexample run: analyze the quartic and assert every
//! known quantity, printing one pass/fail line per assertion.

use serde::Serialize;

use ballmin::branch::{fd_dual_second_derivative, trace_branch, BranchTraceConfig};
use ballmin::problems::counterexample_quartic;

use crate::pipeline::{run_analysis, PipelineOptions};
use crate::problem::ProblemFile;
use crate::report::{real, to_json, AnalysisReport};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Assertion {
    fn check(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (observed - expected).abs() <= tolerance;
        Self { name: name.into(), observed, expected, tolerance, passed }
    }

    /// Boolean condition rendered as 1.0 / 0.0.
    fn flag(name: impl Into<String>, condition: bool) -> Self {
        Self {
            name: name.into(),
            observed: if condition { 1.0 } else { 0.0 },
            expected: 1.0,
            tolerance: 0.0,
            passed: condition,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleRun {
    pub report: AnalysisReport,
    pub assertions: Vec<Assertion>,
    pub all_passed: bool,
}

/// Default tolerances per assertion family; a `--tol` override replaces all
/// of them at once.
const PAIR_TOL: f64 = 1e-8;
const VALUE_TOL: f64 = 1e-12;
const CURVATURE_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-6;
const FD_AGREEMENT_TOL: f64 = 1e-4;

pub fn run_example(opts: &PipelineOptions, tol_override: Option<f64>) -> Result<ExampleRun, CliError> {
    let poly = counterexample_quartic::<f64>();
    let echo = ProblemFile::from_polynomial(&poly);
    let report = run_analysis(&poly, echo, opts)?;

    let t = |default: f64| tol_override.unwrap_or(default);
    let mut assertions = Vec::new();

    assertions.push(Assertion::check(
        "stationary pair count",
        report.stationary.pairs.len() as f64,
        2.0,
        0.0,
    ));

    if report.stationary.pairs.len() == 2 {
        let p0 = &report.stationary.pairs[0];
        let p1 = &report.stationary.pairs[1];
        assertions.push(Assertion::check("pair 0 point", p0.x[0], -1.0, t(PAIR_TOL)));
        assertions.push(Assertion::check("pair 0 multiplier", p0.rho, 4.0, t(PAIR_TOL)));
        assertions.push(Assertion::check("pair 1 point", p1.x[0], 1.0, t(PAIR_TOL)));
        assertions.push(Assertion::check("pair 1 multiplier", p1.rho, 44.0 / 5.0, t(PAIR_TOL)));

        assertions.push(Assertion::check(
            "objective value at -1",
            poly.eval(&[-1.0]).map_err(CliError::from)?,
            -3.0,
            t(VALUE_TOL),
        ));
        assertions.push(Assertion::check(
            "objective value at 1",
            poly.eval(&[1.0]).map_err(CliError::from)?,
            -7.0 / 5.0,
            t(VALUE_TOL),
        ));

        if let Some(hyp) = &report.curvature_criterion {
            assertions.push(Assertion::check(
                "dual curvature at multiplier 4",
                hyp.pairs[0].curvature.unwrap_or(f64::NAN),
                5.0 / 4.0,
                t(CURVATURE_TOL),
            ));
            assertions.push(Assertion::check(
                "dual curvature at multiplier 44/5",
                hyp.pairs[1].curvature.unwrap_or(f64::NAN),
                5.0 / 76.0,
                t(CURVATURE_TOL),
            ));
            assertions.push(Assertion::flag("curvature hypotheses hold for all pairs", hyp.all_hold));
        }

        // finite-difference cross-check of the dual curvature along a short
        // branch trace around each pair
        for (i, expected) in [(0usize, 5.0 / 4.0), (1, 5.0 / 76.0)] {
            let pair = &report.stationary.pairs[i];
            let step = 5e-4;
            let cfg = BranchTraceConfig {
                rho_lo: pair.rho - step,
                rho_hi: pair.rho + step,
                step,
                corrector_tol: 1e-11,
                max_corrector_iters: 25,
            };
            let trace = trace_branch(&poly, pair, &cfg).map_err(CliError::from)?;
            let fd = fd_dual_second_derivative(&poly, &trace, pair.rho).map_err(CliError::from)?;
            assertions.push(Assertion::check(
                format!("finite-difference dual curvature at pair {i}"),
                fd,
                expected,
                t(FD_AGREEMENT_TOL) * (1.0 + expected),
            ));
        }
    }

    if let Some(outcome) = &report.global_certificate {
        assertions.push(Assertion::flag(
            "definiteness certificate refuted at largest multiplier",
            matches!(outcome.certificate.verdict, ballmin::certify::Verdict::Refuted),
        ));
        // passes exactly when the witness eigenvalue is <= -76/5 + tolerance
        assertions.push(Assertion::check(
            "witness eigenvalue at most -76/5",
            outcome.certificate.extreme_eigenvalue.max(-76.0 / 5.0),
            -76.0 / 5.0,
            t(ORACLE_TOL),
        ));
    }

    if let Some(oracle) = &report.oracle {
        assertions.push(Assertion::check(
            "oracle minimum value",
            oracle.result.min_value,
            -3.0,
            t(ORACLE_TOL),
        ));
        assertions.push(Assertion::check(
            "oracle argmin",
            oracle.result.argmin[0],
            -1.0,
            t(ORACLE_TOL),
        ));
        if let Some(c) = &oracle.comparison {
            assertions.push(Assertion::check(
                "designee value",
                c.designee_value,
                -7.0 / 5.0,
                t(ORACLE_TOL),
            ));
        }
    }

    match &report.refutation {
        Some(r) => {
            assertions.push(Assertion::check("refutation gap", r.gap, 8.0 / 5.0, t(ORACLE_TOL)));
            assertions.push(Assertion::flag("refutation recorded with hypotheses holding", r.hypotheses_hold));
        }
        None => assertions.push(Assertion::flag("refutation record present", false)),
    }

    let all_passed = assertions.iter().all(|a| a.passed);
    Ok(ExampleRun { report, assertions, all_passed })
}

pub fn render(run: &ExampleRun, json: bool) -> String {
    if json {
        return to_json(run);
    }
    let mut out = String::new();
    for a in &run.assertions {
        out.push_str(&format!(
            "{}: {} (observed {}, expected {}, tolerance {})\n",
            if a.passed { "PASS" } else { "FAIL" },
            a.name,
            real(a.observed),
            real(a.expected),
            real(a.tolerance)
        ));
    }
    out.push_str(if run.all_passed { "all assertions passed\n" } else { "assertion failures\n" });
    out
}

/// Name of the first failing assertion, for the exit diagnostic.
pub fn first_failure(run: &ExampleRun) -> Option<&str> {
    run.assertions.iter().find(|a| !a.passed).map(|a| a.name.as_str())
}
