//! Analysis report: one serializable structure holding every stage's output,
//! with machine-readable JSON (all reals at 17 significant digits, byte
//! deterministic) and a matching human-readable rendering.

use std::io;

use serde::Serialize;

use ballmin::certify::{CertificateMode, CertificateResult, Verdict};
use ballmin::dual::CurvatureHypotheses;
use ballmin::{CertificateOutcome64, DualEvaluation64, OracleResult64, StationarySet64};

use crate::problem::{ProblemFile, TermSpec};

#[derive(Clone, Debug, Serialize)]
pub struct ProblemSection {
    pub dimension: usize,
    pub degree: u32,
    pub polynomial: Vec<TermSpec>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairDual {
    pub pair_index: usize,
    pub x: Vec<f64>,
    pub evaluation: DualEvaluation64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSection {
    pub result: OracleResult64,
    pub comparison: Option<ballmin::oracle::ComparisonReport<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefutationSection {
    /// The per-pair curvature hypotheses all held, so the designation was
    /// licensed by the criterion being refuted.
    pub hypotheses_hold: bool,
    pub designee_x: Vec<f64>,
    pub designee_value: f64,
    pub oracle_argmin: Vec<f64>,
    pub oracle_value: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetaSection {
    pub version: &'static str,
    pub seed: u64,
    pub start_count: usize,
    pub newton_tol: f64,
    pub dedup_tol: f64,
    pub tie_tol: f64,
    pub rho_positivity_floor: f64,
    pub max_roots: usize,
    pub certificate_mode: CertificateMode,
    pub certificate_radius: f64,
    pub sample_count: usize,
    pub oracle_points_per_axis: Option<usize>,
    pub value_tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub problem: ProblemSection,
    pub concavity: CertificateResult<f64>,
    pub stationary: StationarySet64,
    pub dual: Vec<PairDual>,
    #[serde(rename = "theorem31")]
    pub global_certificate: Option<CertificateOutcome64>,
    #[serde(rename = "theorem32")]
    pub curvature_criterion: Option<CurvatureHypotheses<f64>>,
    pub oracle: Option<OracleSection>,
    pub refutation: Option<RefutationSection>,
    pub meta: MetaSection,
}

impl ProblemSection {
    pub fn new(echo: ProblemFile, degree: u32) -> Self {
        Self { dimension: echo.dimension, degree, polynomial: echo.polynomial }
    }
}

/// JSON formatter emitting every real with 17 significant digits, which
/// round-trips `f64` losslessly and keeps reports byte-identical across runs.
struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:e}")
    }
}

/// Serializes any report value with the 17-significant-digit float format.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value.serialize(&mut ser).expect("report serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits utf-8")
}

/// 17-significant-digit rendering used by the text output, matching the JSON.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| real(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::CertifiedExact => "certified_exact",
        Verdict::CertifiedSampled => "certified_sampled",
        Verdict::Refuted => "refuted",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn mode_name(m: CertificateMode) -> &'static str {
    match m {
        CertificateMode::Strict => "strict",
        CertificateMode::Relaxed => "relaxed",
    }
}

fn certificate_lines(out: &mut String, r: &CertificateResult<f64>, eig_label: &str) {
    out.push_str(&format!("  verdict: {}\n", verdict_name(r.verdict)));
    out.push_str(&format!("  {eig_label}: {}\n", real(r.extreme_eigenvalue)));
    out.push_str(&format!("  witness point: {}\n", vector(&r.witness_point)));
    out.push_str(&format!("  margin: {}\n", real(r.margin)));
    if let Some(reason) = &r.exactness_reason {
        out.push_str(&format!("  exact because: {reason}\n"));
    }
}

/// Human-readable rendering; every numeric value matches the JSON digits.
pub fn render_text(report: &AnalysisReport) -> String {
    let mut out = String::new();

    out.push_str("== problem ==\n");
    out.push_str(&format!(
        "  dimension {}, degree {}, {} terms\n",
        report.problem.dimension,
        report.problem.degree,
        report.problem.polynomial.len()
    ));
    for t in &report.problem.polynomial {
        out.push_str(&format!("  term: c = {}, p = {:?}\n", real(t.c), t.p));
    }

    out.push_str("== strict concavity on the ball ==\n");
    certificate_lines(&mut out, &report.concavity, "max hessian eigenvalue found");

    out.push_str("== stationary pairs ==\n");
    out.push_str(&format!(
        "  {} pairs in {} multiplier groups, {} nonpositive-multiplier roots\n",
        report.stationary.pairs.len(),
        report.stationary.groups.len(),
        report.stationary.nonpositive_rho_pairs.len()
    ));
    for (i, pair) in report.stationary.pairs.iter().enumerate() {
        out.push_str(&format!(
            "  pair {i}: rho = {}, x = {}, residual = {}\n",
            real(pair.rho),
            vector(&pair.x),
            real(pair.residual_inf_norm)
        ));
    }
    for (g, group) in report.stationary.groups.iter().enumerate() {
        out.push_str(&format!(
            "  group {g}: rho = {}, members {:?}\n",
            real(group.rho),
            group.members
        ));
    }

    out.push_str("== dual function per pair ==\n");
    for d in &report.dual {
        let curvature = match d.evaluation.second_derivative {
            Some(v) => real(v),
            None => "undefined (singular shifted hessian)".to_string(),
        };
        out.push_str(&format!(
            "  pair {}: value = {}, slope = {}, curvature = {}, det shifted hessian = {}\n",
            d.pair_index,
            real(d.evaluation.value),
            real(d.evaluation.first_derivative),
            curvature,
            real(d.evaluation.det_shifted_hessian)
        ));
    }

    out.push_str("== dual-curvature criterion (per-pair hypotheses) ==\n");
    match &report.curvature_criterion {
        None => out.push_str("  not evaluated: no stationary pairs\n"),
        Some(h) => {
            for pc in &h.pairs {
                out.push_str(&format!(
                    "  pair {}: det nonzero: {}, curvature positive: {}, holds: {}\n",
                    pc.pair_index, pc.det_nonzero, pc.curvature_positive, pc.holds
                ));
            }
            out.push_str(&format!("  hypotheses hold for all pairs: {}\n", h.all_hold));
        }
    }

    out.push_str("== global-minimizer certificate ==\n");
    match &report.global_certificate {
        None => out.push_str("  not evaluated: no stationary pairs\n"),
        Some(outcome) => {
            out.push_str(&format!(
                "  mode {} at rho = {}\n",
                mode_name(outcome.mode),
                real(outcome.rho)
            ));
            certificate_lines(&mut out, &outcome.certificate, "min shifted-hessian eigenvalue found");
            match &outcome.designated {
                Some(d) => out.push_str(&format!(
                    "  designated minimizer: x = {}, value = {}\n",
                    vector(&d.representative_x),
                    real(d.value)
                )),
                None => out.push_str("  no designation\n"),
            }
        }
    }

    out.push_str("== grid oracle ==\n");
    match &report.oracle {
        None => out.push_str("  skipped (dimension above oracle limit)\n"),
        Some(o) => {
            out.push_str(&format!(
                "  min value = {} at {} (resolution {})\n",
                real(o.result.min_value),
                vector(&o.result.argmin),
                real(o.result.grid_resolution)
            ));
            if let Some(c) = &o.comparison {
                out.push_str(&format!(
                    "  designee value = {} at {}; matches oracle: {}\n",
                    real(c.designee_value),
                    vector(&c.designee_x),
                    c.designee_matches_oracle
                ));
            }
        }
    }

    out.push_str("== refutation ==\n");
    match &report.refutation {
        None => out.push_str("  none\n"),
        Some(r) => {
            out.push_str(
                "  the dual-curvature criterion designates a point that is not the global minimizer\n",
            );
            out.push_str(&format!(
                "  designee x = {}, value = {}\n",
                vector(&r.designee_x),
                real(r.designee_value)
            ));
            out.push_str(&format!(
                "  oracle minimum = {} at {}\n",
                real(r.oracle_value),
                vector(&r.oracle_argmin)
            ));
            out.push_str(&format!("  gap = {}\n", real(r.gap)));
        }
    }

    out.push_str("== meta ==\n");
    out.push_str(&format!(
        "  seed {}, starts {}, newton tol {}, mode {}, radius {}, samples {}\n",
        report.meta.seed,
        report.meta.start_count,
        real(report.meta.newton_tol),
        mode_name(report.meta.certificate_mode),
        real(report.meta.certificate_radius),
        report.meta.sample_count
    ));
    if let Some(p) = report.meta.oracle_points_per_axis {
        out.push_str(&format!("  oracle grid {p} points per axis, value tol {}\n", real(report.meta.value_tol)));
    }

    out
}
