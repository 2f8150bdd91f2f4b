//! Cross-checks of the analytic machinery against independent oracles:
//! finite-difference gradient and hessian agreement, the branch tangent
//! identity, and finite-difference versus analytic dual curvature at every
//! stationary pair found.

use serde::Serialize;

use crate::branch::{branch_tangent, fd_dual_second_derivative, trace_branch, BranchTraceConfig};
use crate::dual::dual_second_derivative;
use crate::error::{Error, Result};
use crate::linalg::inf_norm;
use crate::objective::{fd_gradient, fd_hessian, SmoothFunction, DEFAULT_FD_STEP};
use crate::sampling::ball_points;
use crate::scalar::{cast, Scalar};
use crate::stationary::{multistart_solve, MultistartConfig};

/// One named check with its worst observed error and bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationCheck<F> {
    pub name: String,
    pub error: F,
    pub tolerance: F,
    pub passed: bool,
}

impl<F: Scalar> ValidationCheck<F> {
    fn new(name: impl Into<String>, error: F, tolerance: F) -> Self {
        let passed = error <= tolerance;
        Self { name: name.into(), error, tolerance, passed }
    }
}

/// All checks performed for one objective.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport<F> {
    pub checks: Vec<ValidationCheck<F>>,
}

impl<F: Scalar> ValidationReport<F> {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Steps for the finite-difference probes. Gradients use the library
/// default near `eps^(1/2)`; value-based second differences need the larger
/// step near `eps^(1/4)` to stay above rounding noise.
const GRAD_FD_STEP: f64 = DEFAULT_FD_STEP;
const HESS_FD_STEP: f64 = 1e-4;
const CURVATURE_FD_STEP: f64 = 5e-4;
const FD_PROBE_COUNT: usize = 16;

/// Dual curvature magnitudes above this indicate a nearly singular shifted
/// hessian, where the finite-difference stencil is not meaningful; those
/// pairs get the tangent-identity check only.
const CURVATURE_FD_CAP: f64 = 1e3;

/// Tangent magnitudes above this mean the pair sits essentially on a fold
/// (shifted hessian close to singular). The identity residual scales with
/// the tangent, so the absolute bound below is not meaningful there.
const TANGENT_CAP: f64 = 1e6;

/// Runs every derivative and branch cross-check against `problem`.
///
/// Failures are recorded in the report, not raised; only structural errors
/// (invalid configuration, suspected continua) propagate as `Err`.
pub fn validate_problem<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    cfg: &MultistartConfig<F>,
) -> Result<ValidationReport<F>> {
    let n = problem.dimension();
    let mut checks = Vec::new();

    let probes = ball_points::<F>(n, FD_PROBE_COUNT, F::one(), cfg.seed ^ 0x517E);
    let mut grad_err = F::zero();
    let mut grad_tol = cast::<F>(GRAD_FD_STEP);
    let mut hess_err = F::zero();
    let mut hess_tol = cast::<F>(GRAD_FD_STEP);
    for x in &probes {
        let g = problem.gradient(x)?;
        let g_fd = fd_gradient(problem, x, cast(GRAD_FD_STEP))?;
        let diff: Vec<F> = g.iter().zip(&g_fd).map(|(&a, &b)| a - b).collect();
        let tol = cast::<F>(1e-5) * (F::one() + inf_norm(&g));
        if inf_norm(&diff) / tol > grad_err / grad_tol {
            grad_err = inf_norm(&diff);
            grad_tol = tol;
        }

        let h = problem.hessian(x)?;
        let h_fd = fd_hessian(problem, x, cast(HESS_FD_STEP))?;
        let mut worst = F::zero();
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((h[(i, j)] - h_fd[(i, j)]).abs());
            }
        }
        let tol = cast::<F>(1e-5) * (F::one() + h.inf_norm());
        if worst / tol > hess_err / hess_tol {
            hess_err = worst;
            hess_tol = tol;
        }
    }
    checks.push(ValidationCheck::new("gradient finite-difference agreement", grad_err, grad_tol));
    checks.push(ValidationCheck::new("hessian finite-difference agreement", hess_err, hess_tol));

    let set = multistart_solve(problem, cfg)?;
    for (i, pair) in set.pairs.iter().enumerate() {
        match branch_tangent(problem, &pair.x, pair.rho) {
            Ok(tangent) => {
                if inf_norm(&tangent) > cast(TANGENT_CAP) {
                    continue;
                }
                let shifted = problem.hessian(&pair.x)?.add_scaled_identity(pair.rho);
                let lhs = shifted.mul_vec(&tangent);
                let res: Vec<F> = lhs.iter().zip(&pair.x).map(|(&a, &b)| a + b).collect();
                let tol = cast::<F>(1e-9) * (F::one() + inf_norm(&pair.x));
                checks.push(ValidationCheck::new(
                    format!("tangent identity at pair {i}"),
                    inf_norm(&res),
                    tol,
                ));
            }
            Err(Error::SingularShiftedHessian) => continue,
            Err(e) => return Err(e),
        }

        let analytic = match dual_second_derivative(problem, &pair.x, pair.rho) {
            Ok(v) => v,
            Err(Error::SingularShiftedHessian) => continue,
            Err(e) => return Err(e),
        };
        if analytic.abs() > cast(CURVATURE_FD_CAP) {
            continue;
        }
        // Large curvature goes with a tight shifted hessian and rapidly
        // growing branch derivatives, so the stencil shrinks with it.
        let step = (cast::<F>(CURVATURE_FD_STEP) / F::one().max(analytic.abs()))
            .max(cast(1e-6));
        let trace_cfg = BranchTraceConfig {
            rho_lo: pair.rho - step,
            rho_hi: pair.rho + step,
            step,
            corrector_tol: cast(1e-11),
            max_corrector_iters: 25,
        };
        let trace = match trace_branch(problem, pair, &trace_cfg) {
            Ok(t) => t,
            Err(_) => continue,
        };
        if trace.truncated_low || trace.truncated_high {
            continue;
        }
        let fd = fd_dual_second_derivative(problem, &trace, pair.rho)?;
        let tol = cast::<F>(1e-4) * (F::one() + analytic.abs());
        checks.push(ValidationCheck::new(
            format!("dual curvature finite-difference agreement at pair {i}"),
            (fd - analytic).abs(),
            tol,
        ));
    }

    Ok(ValidationReport { checks })
}
