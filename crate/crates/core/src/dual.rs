//! The canonical dual function along a stationary branch and its closed-form
//! derivatives.
//!
//! For a branch point `x` at multiplier `rho`:
//!
//! ```text
//! dual value        = P(x) + (rho/2) x'x - rho/2
//! first derivative  = (x'x - 1) / 2
//! second derivative = -x' [hess P(x) + rho I]^{-1} x
//! ```
//!
//! The second derivative exists only where the shifted hessian is
//! nonsingular; a singular solve is reported as an error, never replaced by
//! a made-up number.
//! Positive dual curvature at a pair is exactly the quadratic-form condition
//! `x' [hess P + rho I]^{-1} x < 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{determinant, dot, solve};
use crate::objective::SmoothFunction;
use crate::scalar::{cast, Scalar};
use crate::stationary::StationarySet;

/// Dual value, slope and curvature at one point, plus the shifted-hessian
/// determinant. `second_derivative` is `None` when the shifted hessian is
/// numerically singular.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualEvaluation<F> {
    pub rho: F,
    pub value: F,
    pub first_derivative: F,
    pub second_derivative: Option<F>,
    pub det_shifted_hessian: F,
    pub curvature_positive: bool,
}

impl<F: Scalar> DualEvaluation<F> {
    /// Evaluates the dual function and both derivatives at `(x, rho)`.
    pub fn at<P: SmoothFunction<F> + ?Sized>(problem: &P, x: &[F], rho: F) -> Result<Self> {
        let value = dual_value(problem, x, rho)?;
        let first_derivative = dual_first_derivative(x);
        let det_shifted_hessian =
            determinant(&problem.hessian(x)?.add_scaled_identity(rho));
        let second_derivative = match dual_second_derivative(problem, x, rho) {
            Ok(v) => Some(v),
            Err(Error::SingularShiftedHessian) => None,
            Err(e) => return Err(e),
        };
        let curvature_positive = matches!(second_derivative, Some(v) if v > F::zero());
        Ok(Self {
            rho,
            value,
            first_derivative,
            second_derivative,
            det_shifted_hessian,
            curvature_positive,
        })
    }
}

/// `P(x) + (rho/2) x'x - rho/2`, evaluated in the factored form
/// `P(x) + rho (x'x - 1) / 2` so the on-sphere case reduces to `P(x)`
/// without cancellation.
pub fn dual_value<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x: &[F],
    rho: F,
) -> Result<F> {
    let value = problem.value(x)?;
    Ok(value + rho * (dot(x, x) - F::one()) / cast(2.0))
}

/// `(x'x - 1) / 2`; zero on the unit sphere.
pub fn dual_first_derivative<F: Scalar>(x: &[F]) -> F {
    (dot(x, x) - F::one()) / cast(2.0)
}

/// `-x' y` where `y` solves `[hess P(x) + rho I] y = x`.
pub fn dual_second_derivative<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x: &[F],
    rho: F,
) -> Result<F> {
    let shifted = problem.hessian(x)?.add_scaled_identity(rho);
    let y = solve(&shifted, x).map_err(|_| Error::SingularShiftedHessian)?;
    Ok(-dot(x, &y))
}

/// Determinant and curvature record for one stationary pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCurvature<F> {
    pub pair_index: usize,
    pub det_shifted_hessian: F,
    /// Shifted hessian passes the nonsingularity (pivot) test.
    pub det_nonzero: bool,
    /// Dual curvature at the pair, absent when the shifted hessian is singular.
    pub curvature: Option<F>,
    /// `x' [hess P + rho I]^{-1} x`, the curvature condition written with the
    /// problem data; equal to minus the curvature.
    pub quadratic_form: Option<F>,
    pub curvature_positive: bool,
    /// Both hypotheses (nonsingular shifted hessian, positive curvature) hold.
    pub holds: bool,
}

/// Per-pair hypothesis report for the dual-curvature criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureHypotheses<F> {
    pub pairs: Vec<PairCurvature<F>>,
    pub all_hold: bool,
}

/// Checks, for every pair in the set, that the shifted hessian is nonsingular
/// and the dual curvature is positive. A singular shifted hessian marks that
/// pair's determinant hypothesis as failed rather than aborting.
pub fn curvature_hypotheses<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    set: &StationarySet<F>,
) -> Result<CurvatureHypotheses<F>> {
    if set.is_empty() {
        return Err(Error::InvalidInput(
            "curvature hypotheses require a nonempty stationary set".into(),
        ));
    }
    let mut pairs = Vec::with_capacity(set.pairs.len());
    for (i, pair) in set.pairs.iter().enumerate() {
        let det = determinant(&problem.hessian(&pair.x)?.add_scaled_identity(pair.rho));
        let (curvature, quadratic_form, det_nonzero) =
            match dual_second_derivative(problem, &pair.x, pair.rho) {
                Ok(v) => (Some(v), Some(-v), true),
                Err(Error::SingularShiftedHessian) => (None, None, false),
                Err(e) => return Err(e),
            };
        let curvature_positive = matches!(curvature, Some(v) if v > F::zero());
        pairs.push(PairCurvature {
            pair_index: i,
            det_shifted_hessian: det,
            det_nonzero,
            curvature,
            quadratic_form,
            curvature_positive,
            holds: det_nonzero && curvature_positive,
        });
    }
    let all_hold = pairs.iter().all(|p| p.holds);
    Ok(CurvatureHypotheses { pairs, all_hold })
}
