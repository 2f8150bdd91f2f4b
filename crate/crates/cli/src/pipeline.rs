//! The full analysis pipeline behind `analyze` and `example`.

use ballmin::certify::{
    certify_global_minimizer, check_strict_concavity, BallSampling, CertificateMode,
};
use ballmin::dual::{curvature_hypotheses, DualEvaluation};
use ballmin::oracle::{compare_candidates, global_min_grid, GridSpec, DEFAULT_VALUE_TOL};
use ballmin::stationary::{multistart_solve, MultistartConfig};
use ballmin::Polynomial64;

use crate::problem::ProblemFile;
use crate::report::{
    AnalysisReport, MetaSection, OracleSection, PairDual, ProblemSection, RefutationSection,
};
use crate::CliError;

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub seed: u64,
    pub starts: Option<usize>,
    pub newton_tol: Option<f64>,
    pub grid_points: Option<usize>,
    pub radius: Option<f64>,
    pub relaxed: bool,
}

pub fn run_analysis(
    poly: &Polynomial64,
    echo: ProblemFile,
    opts: &PipelineOptions,
) -> Result<AnalysisReport, CliError> {
    let n = poly.dimension();

    let mut ms = MultistartConfig::for_dimension(n);
    ms.seed = opts.seed;
    if let Some(starts) = opts.starts {
        ms.start_count = starts;
    }
    if let Some(tol) = opts.newton_tol {
        ms.newton_tol = tol;
    }

    let mode = if opts.relaxed { CertificateMode::Relaxed } else { CertificateMode::Strict };
    let mut sampling = match mode {
        CertificateMode::Strict => BallSampling::for_dimension(n),
        CertificateMode::Relaxed => BallSampling::relaxed_for_dimension(n),
    };
    sampling.seed = opts.seed;
    if let Some(radius) = opts.radius {
        sampling.radius = radius;
    }

    let mut concavity_sampling = BallSampling::for_dimension(n);
    concavity_sampling.seed = opts.seed;
    let concavity = check_strict_concavity(poly, &concavity_sampling)?;

    let set = multistart_solve(poly, &ms)?;

    let mut dual = Vec::with_capacity(set.pairs.len());
    for (i, pair) in set.pairs.iter().enumerate() {
        dual.push(PairDual {
            pair_index: i,
            x: pair.x.clone(),
            evaluation: DualEvaluation::at(poly, &pair.x, pair.rho)?,
        });
    }

    let (curvature_criterion, global_certificate) = if set.is_empty() {
        (None, None)
    } else {
        let hypotheses = curvature_hypotheses(poly, &set)?;
        let outcome = certify_global_minimizer(poly, &set, &sampling, mode, None)?;
        (Some(hypotheses), Some(outcome))
    };

    let grid_spec = {
        let mut spec = GridSpec::for_dimension(n);
        if let Some(p) = opts.grid_points {
            spec.points_per_axis = p;
        }
        spec
    };
    let oracle = if n <= grid_spec.dimension_limit {
        let result = global_min_grid(poly, &grid_spec)?;
        let comparison = if set.is_empty() {
            None
        } else {
            Some(compare_candidates(poly, &set, &result, DEFAULT_VALUE_TOL)?)
        };
        Some(OracleSection { result, comparison })
    } else {
        None
    };

    let refutation = match (&curvature_criterion, &oracle) {
        (Some(hyp), Some(section)) => section.comparison.as_ref().and_then(|c| {
            c.refutation.as_ref().filter(|_| hyp.all_hold).map(|r| RefutationSection {
                hypotheses_hold: hyp.all_hold,
                designee_x: r.designee_x.clone(),
                designee_value: r.designee_value,
                oracle_argmin: r.oracle_argmin.clone(),
                oracle_value: r.oracle_value,
                gap: r.gap,
            })
        }),
        _ => None,
    };

    let meta = MetaSection {
        version: env!("CARGO_PKG_VERSION"),
        seed: ms.seed,
        start_count: ms.start_count,
        newton_tol: ms.newton_tol,
        dedup_tol: ms.dedup_tol,
        tie_tol: ms.tie_tol,
        rho_positivity_floor: ms.rho_positivity_floor,
        max_roots: ms.max_roots,
        certificate_mode: mode,
        certificate_radius: sampling.radius,
        sample_count: sampling.sample_count,
        oracle_points_per_axis: oracle.as_ref().map(|_| grid_spec.points_per_axis),
        value_tol: DEFAULT_VALUE_TOL,
    };

    Ok(AnalysisReport {
        problem: ProblemSection::new(echo, poly.degree()),
        concavity,
        stationary: set,
        dual,
        global_certificate,
        curvature_criterion,
        oracle,
        refutation,
        meta,
    })
}
