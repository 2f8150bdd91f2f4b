//! Continuation of the stationarity branch through a pair.
//!
//! The implicit function theorem turns `grad P(x(rho)) + rho x(rho) = 0` into
//! the tangent system `[hess P(x) + rho I] x'(rho) = -x(rho)`. Tracing
//! integrates that tangent with a classical fourth-order Runge-Kutta
//! predictor on a fixed multiplier grid and re-converges each grid point with
//! Newton in `x` alone (`rho` frozen), so every emitted point satisfies the
//! stationarity residual to the corrector tolerance, not merely to the
//! integrator's truncation error.
//!
//! The branch leaves the unit sphere away from the seed; only stationarity is
//! maintained. A direction stops early, and is flagged, when the shifted
//! hessian becomes singular or the corrector fails, which is where the branch
//! genuinely loses its implicit-function parametrization.

use serde::Serialize;

use crate::dual::dual_value;
use crate::error::{Error, Result};
use crate::linalg::{inf_norm, solve};
use crate::objective::SmoothFunction;
use crate::scalar::{cast, Scalar};
use crate::stationary::StationaryPair;

/// Multiplier window and stepping for [`trace_branch`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchTraceConfig<F> {
    pub rho_lo: F,
    pub rho_hi: F,
    pub step: F,
    pub corrector_tol: F,
    pub max_corrector_iters: usize,
}

impl<F: Scalar> BranchTraceConfig<F> {
    /// Default window around a seed multiplier: a 1/16 relative margin padded
    /// by 1e-3, with step `1e-2 * max(1, rho_star)`.
    pub fn around(rho_star: F) -> Self {
        let margin = rho_star.abs() / cast(16.0) + cast(1e-3);
        Self {
            rho_lo: rho_star - margin,
            rho_hi: rho_star + margin,
            step: cast::<F>(1e-2) * F::one().max(rho_star.abs()),
            corrector_tol: cast(1e-11),
            max_corrector_iters: 25,
        }
    }

    /// Same defaults with a caller-chosen step.
    pub fn around_with_step(rho_star: F, step: F) -> Self {
        Self { step, ..Self::around(rho_star) }
    }

    fn validate(&self, rho_star: F) -> Result<()> {
        let finite = self.rho_lo.is_finite()
            && self.rho_hi.is_finite()
            && self.step.is_finite()
            && self.corrector_tol.is_finite();
        if !finite || self.rho_lo >= self.rho_hi {
            return Err(Error::InvalidInput("trace window must satisfy rho_lo < rho_hi".into()));
        }
        if rho_star < self.rho_lo || rho_star > self.rho_hi {
            return Err(Error::InvalidInput(
                "seed multiplier must lie inside the trace window".into(),
            ));
        }
        if self.step <= F::zero() || self.corrector_tol <= F::zero() {
            return Err(Error::InvalidInput("trace step and tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// One corrected point of a traced branch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchPoint<F> {
    pub rho: F,
    pub x: Vec<F>,
    /// Branch tangent `x'(rho)` at this point.
    pub tangent: Vec<F>,
    /// `|grad P(x) + rho x|_inf` after correction.
    pub residual_inf_norm: F,
}

/// A traced branch: grid points ordered by multiplier, seed included.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchTrace<F> {
    pub seed: StationaryPair<F>,
    pub points: Vec<BranchPoint<F>>,
    /// The downward direction stopped before reaching `rho_lo`.
    pub truncated_low: bool,
    /// The upward direction stopped before reaching `rho_hi`.
    pub truncated_high: bool,
}

impl<F: Scalar> BranchTrace<F> {
    /// Index of the grid point whose multiplier matches `rho`.
    pub fn index_of(&self, rho: F) -> Option<usize> {
        let tol = cast::<F>(1e-9) * F::one().max(rho.abs());
        self.points.iter().position(|p| (p.rho - rho).abs() <= tol)
    }
}

/// Solves `[hess P(x) + rho I] y = -x` for the branch tangent.
pub fn branch_tangent<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x: &[F],
    rho: F,
) -> Result<Vec<F>> {
    let shifted = problem.hessian(x)?.add_scaled_identity(rho);
    let rhs: Vec<F> = x.iter().map(|&v| -v).collect();
    solve(&shifted, &rhs).map_err(|_| Error::SingularShiftedHessian)
}

fn stationarity_residual<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x: &[F],
    rho: F,
) -> Result<Vec<F>> {
    let grad = problem.gradient(x)?;
    Ok(grad.iter().zip(x).map(|(&g, &xi)| g + rho * xi).collect())
}

/// Newton on `x -> grad P(x) + rho x` at fixed `rho`.
fn correct<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x: &mut [F],
    rho: F,
    cfg: &BranchTraceConfig<F>,
) -> Result<F> {
    for _ in 0..=cfg.max_corrector_iters {
        let residual = stationarity_residual(problem, x, rho)?;
        let res_norm = inf_norm(&residual);
        if !res_norm.is_finite() {
            return Err(Error::NewtonDiverged(cfg.max_corrector_iters));
        }
        if res_norm <= cfg.corrector_tol {
            return Ok(res_norm);
        }
        let shifted = problem.hessian(x)?.add_scaled_identity(rho);
        let rhs: Vec<F> = residual.iter().map(|&v| -v).collect();
        let step = solve(&shifted, &rhs).map_err(|_| Error::SingularShiftedHessian)?;
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi = *xi + *si;
        }
    }
    Err(Error::NewtonDiverged(cfg.max_corrector_iters))
}

/// One RK4 predictor step of size `h` along the branch tangent field.
fn rk4_predict<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x: &[F],
    rho: F,
    h: F,
) -> Result<Vec<F>> {
    let half = h / cast(2.0);
    let sixth = h / cast(6.0);
    let two = cast::<F>(2.0);

    let shifted = |base: &[F], dir: &[F], scale: F| -> Vec<F> {
        base.iter().zip(dir).map(|(&b, &d)| b + scale * d).collect()
    };

    let k1 = branch_tangent(problem, x, rho)?;
    let k2 = branch_tangent(problem, &shifted(x, &k1, half), rho + half)?;
    let k3 = branch_tangent(problem, &shifted(x, &k2, half), rho + half)?;
    let k4 = branch_tangent(problem, &shifted(x, &k3, h), rho + h)?;

    Ok(x.iter()
        .enumerate()
        .map(|(i, &xi)| xi + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect())
}

/// Traces the branch through `pair` over `[cfg.rho_lo, cfg.rho_hi]`.
///
/// The seed is first re-converged at its own multiplier; a seed whose
/// residual is too large to correct is rejected, and a singular shifted
/// hessian at the seed is a hard failure. Truncation away from the seed is
/// recorded in the flags instead.
pub fn trace_branch<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    pair: &StationaryPair<F>,
    cfg: &BranchTraceConfig<F>,
) -> Result<BranchTrace<F>> {
    let n = problem.dimension();
    if pair.x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: pair.x.len() });
    }
    cfg.validate(pair.rho)?;

    let seed_residual = inf_norm(&stationarity_residual(problem, &pair.x, pair.rho)?);
    if seed_residual > cast(1e-6) {
        return Err(Error::InvalidInput(format!(
            "seed stationarity residual {seed_residual} too large to trace"
        )));
    }
    let mut seed_x = pair.x.clone();
    let seed_res = correct(problem, &mut seed_x, pair.rho, cfg)?;
    let seed_tangent = branch_tangent(problem, &seed_x, pair.rho)?;
    let seed_point = BranchPoint {
        rho: pair.rho,
        x: seed_x,
        tangent: seed_tangent,
        residual_inf_norm: seed_res,
    };

    // Walk one direction from the seed, stepping by +-step with a final
    // partial step onto the window bound. Returns points in walk order.
    let walk = |sign: F, bound: F| -> (Vec<BranchPoint<F>>, bool) {
        let mut points = Vec::new();
        let mut x = seed_point.x.clone();
        let mut rho = pair.rho;
        let mut k = 0usize;
        loop {
            k += 1;
            let mut next_rho = pair.rho + sign * cast::<F>(k as f64) * cfg.step;
            if (next_rho - bound) * sign > F::zero() {
                next_rho = bound;
            }
            let h = next_rho - rho;
            // skip a vanishing partial step at the bound
            if h.abs() <= cfg.step * cast(1e-6) {
                return (points, false);
            }
            let predicted = match rk4_predict(problem, &x, rho, h) {
                Ok(p) => p,
                Err(_) => return (points, true),
            };
            let mut corrected = predicted.clone();
            let res = match correct(problem, &mut corrected, next_rho, cfg) {
                Ok(r) => r,
                Err(_) => return (points, true),
            };
            // A correction that moves far from the predictor means Newton
            // converged to a different solution arm (typically past a fold);
            // treat it as the end of this branch, not as a branch point.
            let drift: Vec<F> =
                corrected.iter().zip(&predicted).map(|(&a, &b)| a - b).collect();
            if inf_norm(&drift) > cast::<F>(0.25) * (F::one() + inf_norm(&predicted)) {
                return (points, true);
            }
            let tangent = match branch_tangent(problem, &corrected, next_rho) {
                Ok(t) => t,
                Err(_) => return (points, true),
            };
            points.push(BranchPoint {
                rho: next_rho,
                x: corrected.clone(),
                tangent,
                residual_inf_norm: res,
            });
            x = corrected;
            rho = next_rho;
            if rho == bound {
                return (points, false);
            }
        }
    };

    let (down, truncated_low) = walk(-F::one(), cfg.rho_lo);
    let (up, truncated_high) = walk(F::one(), cfg.rho_hi);

    let mut points: Vec<BranchPoint<F>> = down.into_iter().rev().collect();
    points.push(seed_point);
    points.extend(up);

    Ok(BranchTrace { seed: pair.clone(), points, truncated_low, truncated_high })
}

/// Second difference of the dual value along the trace at an interior grid
/// point. Uses the three surrounding grid points with the general unequal
/// spacing formula, so partial end steps are handled.
pub fn fd_dual_second_derivative<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    trace: &BranchTrace<F>,
    rho: F,
) -> Result<F> {
    let i = trace
        .index_of(rho)
        .ok_or_else(|| Error::InvalidInput("rho is not a grid point of the trace".into()))?;
    if i == 0 || i + 1 >= trace.points.len() {
        return Err(Error::InvalidInput(
            "rho must be an interior grid point with both neighbors present".into(),
        ));
    }
    let lo = &trace.points[i - 1];
    let mid = &trace.points[i];
    let hi = &trace.points[i + 1];
    let f_lo = dual_value(problem, &lo.x, lo.rho)?;
    let f_mid = dual_value(problem, &mid.x, mid.rho)?;
    let f_hi = dual_value(problem, &hi.x, hi.rho)?;
    let h_lo = mid.rho - lo.rho;
    let h_hi = hi.rho - mid.rho;
    let two = cast::<F>(2.0);
    Ok(two * (h_lo * f_hi - (h_lo + h_hi) * f_mid + h_hi * f_lo)
        / (h_lo * h_hi * (h_lo + h_hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{dual_first_derivative, dual_second_derivative};
    use crate::problems::{counterexample_quartic, radial_quadratic_2d, shifted_parabola};
    use crate::stationary::{multistart_solve, MultistartConfig};
    use approx::assert_relative_eq;

    fn quartic_pairs() -> (crate::objective::PolynomialFunction<f64>, Vec<StationaryPair<f64>>) {
        let p = counterexample_quartic::<f64>();
        let set = multistart_solve(&p, &MultistartConfig::for_dimension(1)).unwrap();
        (p, set.pairs)
    }

    #[test]
    fn tangent_reference_values() {
        let p = counterexample_quartic::<f64>();
        let t = branch_tangent(&p, &[-1.0], 4.0).unwrap();
        assert_relative_eq!(t[0], -5.0 / 4.0, epsilon = 1e-12);
        let t = branch_tangent(&p, &[1.0], 44.0 / 5.0).unwrap();
        assert_relative_eq!(t[0], 5.0 / 76.0, epsilon = 1e-12);
    }

    #[test]
    fn tangent_identity_holds() {
        let p = counterexample_quartic::<f64>();
        for &(x, rho) in &[(-1.0, 4.0), (1.0, 44.0 / 5.0)] {
            let t = branch_tangent(&p, &[x], rho).unwrap();
            let shifted = p.hessian(&[x]).unwrap().add_scaled_identity(rho);
            let lhs = shifted.mul_vec(&t);
            assert!((lhs[0] + x).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn tangent_with_vanishing_hessian() {
        // linear objective: hessian is identically zero, shifted hessian is I
        let p = crate::objective::PolynomialFunction::new(
            2,
            [crate::objective::Monomial::new(2.0, vec![1, 0])],
        )
        .unwrap();
        let t = branch_tangent(&p, &[0.3, -0.4], 1.0).unwrap();
        assert_eq!(t, vec![-0.3, 0.4]);
    }

    #[test]
    fn trace_quartic_first_pair_grid() {
        let (p, pairs) = quartic_pairs();
        let cfg = BranchTraceConfig {
            rho_lo: 3.5,
            rho_hi: 4.5,
            step: 1e-2,
            corrector_tol: 1e-11,
            max_corrector_iters: 25,
        };
        let trace = trace_branch(&p, &pairs[0], &cfg).unwrap();
        // This branch folds where the shifted hessian determinant vanishes,
        // at rho ~ 3.976, so the downward leg truncates before 3.5. The
        // upward leg reaches 4.5 in full.
        assert!(trace.truncated_low);
        assert!(!trace.truncated_high);
        assert!((trace.points.last().unwrap().rho - 4.5).abs() < 1e-9);
        assert!(trace.points.first().unwrap().rho > 3.96);
        assert!(trace.points.len() >= 52);
        for pt in &trace.points {
            assert!(pt.residual_inf_norm <= 1e-10);
        }
        let i = trace.index_of(4.0).unwrap();
        assert!((trace.points[i].x[0] + 1.0).abs() < 1e-12);
        for w in trace.points.windows(2) {
            assert!(w[1].rho > w[0].rho);
            assert!(w[1].rho - w[0].rho <= 1e-2 + 1e-9);
        }
    }

    #[test]
    fn trace_full_window_inside_fold_free_region() {
        let (p, pairs) = quartic_pairs();
        let cfg = BranchTraceConfig {
            rho_lo: 4.0 - 0.01,
            rho_hi: 4.0 + 0.01,
            step: 2e-4,
            corrector_tol: 1e-11,
            max_corrector_iters: 25,
        };
        let trace = trace_branch(&p, &pairs[0], &cfg).unwrap();
        assert!(!trace.truncated_low && !trace.truncated_high);
        assert_eq!(trace.points.len(), 101);
        for pt in &trace.points {
            assert!(pt.residual_inf_norm <= 1e-10);
        }
    }

    #[test]
    fn trace_quartic_second_pair_monotone() {
        let (p, pairs) = quartic_pairs();
        let cfg = BranchTraceConfig {
            rho_lo: 8.3,
            rho_hi: 9.3,
            step: 1e-2,
            corrector_tol: 1e-11,
            max_corrector_iters: 25,
        };
        let trace = trace_branch(&p, &pairs[1], &cfg).unwrap();
        assert!(!trace.truncated_low && !trace.truncated_high);
        for pt in &trace.points {
            assert!(pt.residual_inf_norm <= 1e-10);
        }
        // x'(rho) = -x/(hess + rho) > 0 on this branch, so x increases
        for w in trace.points.windows(2) {
            assert!(w[1].x[0] > w[0].x[0]);
        }
    }

    #[test]
    fn trace_fails_on_degenerate_seed() {
        let p = radial_quadratic_2d::<f64>();
        // (1, 0) with rho = 2 is stationary but the shifted hessian vanishes
        let pair = StationaryPair { x: vec![1.0, 0.0], rho: 2.0, residual_inf_norm: 0.0 };
        let cfg = BranchTraceConfig::around(2.0);
        assert!(matches!(
            trace_branch(&p, &pair, &cfg),
            Err(Error::SingularShiftedHessian) | Err(Error::NewtonDiverged(_))
        ));
    }

    #[test]
    fn trace_rejects_offbranch_seed() {
        let p = counterexample_quartic::<f64>();
        let pair = StationaryPair { x: vec![0.5], rho: 4.0, residual_inf_norm: 0.0 };
        assert!(matches!(
            trace_branch(&p, &pair, &BranchTraceConfig::around(4.0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn tangent_identity_along_trace() {
        let (p, pairs) = quartic_pairs();
        let cfg = BranchTraceConfig::around(pairs[0].rho);
        let trace = trace_branch(&p, &pairs[0], &cfg).unwrap();
        for pt in &trace.points {
            let shifted = p.hessian(&pt.x).unwrap().add_scaled_identity(pt.rho);
            let lhs = shifted.mul_vec(&pt.tangent);
            let res: Vec<f64> = lhs.iter().zip(&pt.x).map(|(a, b)| a + b).collect();
            assert!(inf_norm(&res) <= 1e-9 * (1.0 + inf_norm(&pt.x)));
        }
    }

    #[test]
    fn fd_curvature_matches_analytic_on_quartic() {
        let (p, pairs) = quartic_pairs();
        for pair in &pairs {
            let step = 5e-4;
            let cfg = BranchTraceConfig {
                rho_lo: pair.rho - step,
                rho_hi: pair.rho + step,
                step,
                corrector_tol: 1e-11,
                max_corrector_iters: 25,
            };
            let trace = trace_branch(&p, pair, &cfg).unwrap();
            let fd = fd_dual_second_derivative(&p, &trace, pair.rho).unwrap();
            let analytic = dual_second_derivative(&p, &pair.x, pair.rho).unwrap();
            assert!(
                (fd - analytic).abs() <= 1e-4 * (1.0 + analytic.abs()),
                "fd {fd} vs analytic {analytic}"
            );
        }
    }

    #[test]
    fn fd_curvature_scalar_closed_form() {
        let p = shifted_parabola::<f64>();
        let set = multistart_solve(&p, &MultistartConfig::for_dimension(1)).unwrap();
        let pair = set.pairs.iter().find(|q| (q.rho - 3.0).abs() < 1e-9).unwrap();
        let step = 1e-4;
        let cfg = BranchTraceConfig {
            rho_lo: 3.0 - step,
            rho_hi: 3.0 + step,
            step,
            corrector_tol: 1e-11,
            max_corrector_iters: 25,
        };
        let trace = trace_branch(&p, pair, &cfg).unwrap();
        let fd = fd_dual_second_derivative(&p, &trace, 3.0).unwrap();
        assert!((fd - (-1.0)).abs() < 1e-6, "fd {fd}");
    }

    #[test]
    fn fd_curvature_rejects_non_grid_and_edge_points() {
        let (p, pairs) = quartic_pairs();
        let cfg = BranchTraceConfig::around(pairs[0].rho);
        let trace = trace_branch(&p, &pairs[0], &cfg).unwrap();
        assert!(fd_dual_second_derivative(&p, &trace, 3.123456).is_err());
        let first_rho = trace.points[0].rho;
        assert!(fd_dual_second_derivative(&p, &trace, first_rho).is_err());
    }

    #[test]
    fn reseeding_recovers_the_branch() {
        let (p, pairs) = quartic_pairs();
        let cfg = BranchTraceConfig {
            rho_lo: 3.8,
            rho_hi: 4.2,
            step: 1e-2,
            corrector_tol: 1e-11,
            max_corrector_iters: 25,
        };
        let trace = trace_branch(&p, &pairs[0], &cfg).unwrap();
        let i = trace.index_of(4.2).unwrap();
        let reseed = StationaryPair {
            x: trace.points[i].x.clone(),
            rho: trace.points[i].rho,
            residual_inf_norm: trace.points[i].residual_inf_norm,
        };
        let back = trace_branch(&p, &reseed, &cfg).unwrap();
        let j = back.index_of(4.0).unwrap();
        let k = trace.index_of(4.0).unwrap();
        assert!((back.points[j].x[0] - trace.points[k].x[0]).abs() <= 1e-8);
    }

    #[test]
    fn dual_slope_matches_first_difference_along_trace() {
        let (p, pairs) = quartic_pairs();
        let step = 2e-4;
        let cfg = BranchTraceConfig {
            rho_lo: pairs[0].rho - 10.0 * step,
            rho_hi: pairs[0].rho + 10.0 * step,
            step,
            corrector_tol: 1e-11,
            max_corrector_iters: 25,
        };
        let trace = trace_branch(&p, &pairs[0], &cfg).unwrap();
        for i in 1..trace.points.len() - 1 {
            let lo = &trace.points[i - 1];
            let mid = &trace.points[i];
            let hi = &trace.points[i + 1];
            let slope_fd = (dual_value(&p, &hi.x, hi.rho).unwrap()
                - dual_value(&p, &lo.x, lo.rho).unwrap())
                / (hi.rho - lo.rho);
            let slope = dual_first_derivative(&mid.x);
            assert!((slope_fd - slope).abs() <= 1e-6, "at rho {}", mid.rho);
        }
    }
}
