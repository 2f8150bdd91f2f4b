//! Stationary pairs of the ball-constrained problem: solutions `(x, rho)` of
//!
//! ```text
//! grad P(x) + rho x = 0,    x' x = 1,    rho > 0
//! ```
//!
//! found by seeded multistart Newton on the square system
//! `[grad P(x) + rho x ; (x'x - 1) / 2]`, then deduplicated, sorted by
//! multiplier and grouped into multiplier ties.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, inf_norm, solve, SquareMatrix};
use crate::objective::SmoothFunction;
use crate::sampling::sphere_points;
use crate::scalar::{cast, Scalar};

/// Absolute tolerance on `|x'x - 1|` for points claimed to be on the sphere.
pub const SPHERE_TOL: f64 = 1e-8;

/// Residual of the stationarity system at `(x, rho)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KktResidual<F> {
    /// `grad P(x) + rho x`
    pub grad_part: Vec<F>,
    /// `x'x - 1`
    pub sphere_part: F,
}

impl<F: Scalar> KktResidual<F> {
    /// Infinity norm over the full residual, sphere component unhalved.
    pub fn inf_norm(&self) -> F {
        inf_norm(&self.grad_part).max(self.sphere_part.abs())
    }
}

/// A converged root of the stationarity system with positive multiplier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationaryPair<F> {
    pub x: Vec<F>,
    pub rho: F,
    pub residual_inf_norm: F,
}

/// Pairs whose multipliers agree within the tie tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoGroup<F> {
    /// Multiplier of the group's first (smallest-rho) member.
    pub rho: F,
    /// Indices into [`StationarySet::pairs`].
    pub members: Vec<usize>,
}

/// All distinct roots found by multistart, ordered by multiplier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationarySet<F> {
    /// Roots with `rho` above the positivity floor, sorted by `(rho, x)`.
    pub pairs: Vec<StationaryPair<F>>,
    /// Partition of `pairs` into multiplier ties; representative multipliers
    /// are strictly increasing.
    pub groups: Vec<RhoGroup<F>>,
    /// Index of the group with the largest multiplier, when any exist.
    pub largest_index: Option<usize>,
    /// Converged roots whose multiplier fell at or below the positivity
    /// floor. Informational only.
    pub nonpositive_rho_pairs: Vec<StationaryPair<F>>,
}

impl<F: Scalar> StationarySet<F> {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The group with the largest multiplier.
    pub fn largest_group(&self) -> Option<&RhoGroup<F>> {
        self.largest_index.map(|i| &self.groups[i])
    }
}

/// Knobs for [`multistart_solve`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultistartConfig<F> {
    pub seed: u64,
    pub start_count: usize,
    pub newton_tol: F,
    pub max_newton_iters: usize,
    pub dedup_tol: F,
    pub tie_tol: F,
    pub rho_positivity_floor: F,
    /// Multistart aborts with [`Error::SuspectedContinuum`] once this many
    /// distinct positive-multiplier roots have been kept.
    pub max_roots: usize,
}

impl<F: Scalar> MultistartConfig<F> {
    /// Defaults scaled to the problem dimension.
    pub fn for_dimension(n: usize) -> Self {
        Self {
            seed: 0,
            start_count: 64.max(32 * n),
            newton_tol: cast(1e-10),
            max_newton_iters: 50,
            dedup_tol: cast(1e-6),
            tie_tol: cast(1e-8),
            rho_positivity_floor: cast(1e-9),
            max_roots: 64,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.start_count >= 1
            && self.max_newton_iters >= 1
            && self.max_roots >= 1
            && self.newton_tol > F::zero()
            && self.dedup_tol > F::zero()
            && self.tie_tol > F::zero();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("multistart configuration out of range".into()))
        }
    }
}

impl<F: Scalar> Default for MultistartConfig<F> {
    fn default() -> Self {
        Self::for_dimension(1)
    }
}

/// Evaluates the stationarity residual at `(x, rho)`.
pub fn kkt_residual<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x: &[F],
    rho: F,
) -> Result<KktResidual<F>> {
    let grad = problem.gradient(x)?;
    let grad_part = grad.iter().zip(x).map(|(&g, &xi)| g + rho * xi).collect();
    Ok(KktResidual { grad_part, sphere_part: dot(x, x) - F::one() })
}

/// The unique multiplier candidate at an on-sphere point:
/// `rho = -x' grad P(x)`, obtained by dotting the stationarity equation
/// with `x` and using `x'x = 1`.
pub fn rho_from_x<F: Scalar, P: SmoothFunction<F> + ?Sized>(problem: &P, x: &[F]) -> Result<F> {
    if (dot(x, x) - F::one()).abs() > cast(SPHERE_TOL) {
        return Err(Error::InvalidInput("rho_from_x requires a point on the unit sphere".into()));
    }
    let grad = problem.gradient(x)?;
    Ok(-dot(x, &grad))
}

/// Newton iteration on `[grad P(x) + rho x ; (x'x - 1)/2]` in the `n + 1`
/// unknowns `(x, rho)`, with Jacobian `[[hess P + rho I, x], [x', 0]]`.
/// A start that already meets the tolerance is returned unchanged.
pub fn newton_refine<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    x0: &[F],
    rho0: F,
    cfg: &MultistartConfig<F>,
) -> Result<StationaryPair<F>> {
    let n = problem.dimension();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: x0.len() });
    }
    let mut x = x0.to_vec();
    let mut rho = rho0;
    let half = cast::<F>(0.5);

    for _ in 0..=cfg.max_newton_iters {
        let residual = kkt_residual(problem, &x, rho)?;
        let res_norm = residual.inf_norm();
        if !res_norm.is_finite() {
            return Err(Error::NewtonDiverged(cfg.max_newton_iters));
        }
        if res_norm <= cfg.newton_tol {
            return Ok(StationaryPair { x, rho, residual_inf_norm: res_norm });
        }

        let hess = problem.hessian(&x)?;
        let mut jac = SquareMatrix::zeros(n + 1);
        for i in 0..n {
            for j in 0..n {
                jac[(i, j)] = hess[(i, j)];
            }
            jac[(i, i)] = jac[(i, i)] + rho;
            jac[(i, n)] = x[i];
            jac[(n, i)] = x[i];
        }
        let mut rhs: Vec<F> = residual.grad_part.iter().map(|&v| -v).collect();
        rhs.push(-half * residual.sphere_part);

        let step = solve(&jac, &rhs).map_err(|_| Error::SingularJacobian)?;
        for i in 0..n {
            x[i] = x[i] + step[i];
        }
        rho = rho + step[n];
    }
    Err(Error::NewtonDiverged(cfg.max_newton_iters))
}

fn is_duplicate<F: Scalar>(a: &StationaryPair<F>, b: &StationaryPair<F>, tol: F) -> bool {
    let dx: Vec<F> = a.x.iter().zip(&b.x).map(|(&p, &q)| p - q).collect();
    inf_norm(&dx) <= tol && (a.rho - b.rho).abs() <= tol
}

fn lex_less<F: Scalar>(a: &[F], b: &[F]) -> bool {
    for (p, q) in a.iter().zip(b) {
        if p < q {
            return true;
        }
        if p > q {
            return false;
        }
    }
    false
}

/// Runs Newton from seeded quasi-uniform sphere starts, keeps the converged
/// roots with multiplier above the positivity floor, deduplicates, sorts by
/// `(rho, x)` and groups multiplier ties.
///
/// Converged roots at or below the floor land in
/// [`StationarySet::nonpositive_rho_pairs`]. Starts whose iteration diverges
/// or hits a singular Jacobian are skipped. The run is sequential and fully
/// determined by `(problem, cfg)`.
pub fn multistart_solve<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    cfg: &MultistartConfig<F>,
) -> Result<StationarySet<F>> {
    cfg.validate()?;
    let n = problem.dimension();
    if n == 0 {
        return Err(Error::InvalidInput("problem dimension must be positive".into()));
    }

    let starts = sphere_points::<F>(n, cfg.start_count, cfg.seed);
    let mut kept: Vec<StationaryPair<F>> = Vec::new();
    let mut nonpositive: Vec<StationaryPair<F>> = Vec::new();

    for start in &starts {
        let rho0 = rho_from_x(problem, start)?.max(cast(0.1));
        let pair = match newton_refine(problem, start, rho0, cfg) {
            Ok(p) => p,
            Err(Error::SingularJacobian) | Err(Error::NewtonDiverged(_)) => continue,
            Err(e) => return Err(e),
        };
        if pair.rho > cfg.rho_positivity_floor {
            if !kept.iter().any(|k| is_duplicate(k, &pair, cfg.dedup_tol)) {
                kept.push(pair);
                if kept.len() >= cfg.max_roots {
                    return Err(Error::SuspectedContinuum {
                        found: kept.len(),
                        cap: cfg.max_roots,
                    });
                }
            }
        } else if !nonpositive.iter().any(|k| is_duplicate(k, &pair, cfg.dedup_tol)) {
            nonpositive.push(pair);
        }
    }

    kept.sort_by(|a, b| {
        a.rho
            .partial_cmp(&b.rho)
            .expect("finite multipliers")
            .then_with(|| if lex_less(&a.x, &b.x) {
                std::cmp::Ordering::Less
            } else if a.x == b.x {
                std::cmp::Ordering::Equal
            } else {
                std::cmp::Ordering::Greater
            })
    });

    let mut groups: Vec<RhoGroup<F>> = Vec::new();
    for (i, pair) in kept.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (pair.rho - g.rho).abs() <= cfg.tie_tol => g.members.push(i),
            _ => groups.push(RhoGroup { rho: pair.rho, members: vec![i] }),
        }
    }
    let largest_index = groups.len().checked_sub(1);

    Ok(StationarySet { pairs: kept, groups, largest_index, nonpositive_rho_pairs: nonpositive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{
        axis_quadratic_2d, counterexample_quartic, radial_quadratic_2d, shifted_parabola,
    };
    use approx::assert_relative_eq;

    #[test]
    fn kkt_residual_at_known_pairs() {
        let p = counterexample_quartic::<f64>();
        let r = kkt_residual(&p, &[-1.0], 4.0).unwrap();
        assert!(r.inf_norm() < 1e-14);
        let r = kkt_residual(&p, &[1.0], 44.0 / 5.0).unwrap();
        assert!(r.inf_norm() < 1e-14);
        let r = kkt_residual(&p, &[0.0], 1.0).unwrap();
        assert_eq!(r.sphere_part, -1.0);
    }

    #[test]
    fn rho_from_x_reference_values() {
        let p = counterexample_quartic::<f64>();
        assert_relative_eq!(rho_from_x(&p, &[-1.0]).unwrap(), 4.0, epsilon = 1e-14);
        assert_relative_eq!(rho_from_x(&p, &[1.0]).unwrap(), 44.0 / 5.0, epsilon = 1e-14);
        let parabola = shifted_parabola::<f64>();
        assert_relative_eq!(rho_from_x(&parabola, &[1.0]).unwrap(), 3.0, epsilon = 1e-14);
        assert!(rho_from_x(&p, &[0.5]).is_err());
    }

    #[test]
    fn newton_converges_to_both_roots() {
        let p = counterexample_quartic::<f64>();
        let cfg = MultistartConfig::for_dimension(1);
        let pair = newton_refine(&p, &[-0.9], 3.0, &cfg).unwrap();
        assert!((pair.x[0] + 1.0).abs() < 1e-10);
        assert!((pair.rho - 4.0).abs() < 1e-10);
        assert!(pair.residual_inf_norm <= cfg.newton_tol);

        let pair = newton_refine(&p, &[0.8], 8.0, &cfg).unwrap();
        assert!((pair.x[0] - 1.0).abs() < 1e-10);
        assert!((pair.rho - 44.0 / 5.0).abs() < 1e-10);
        assert!(pair.residual_inf_norm <= cfg.newton_tol);
    }

    #[test]
    fn newton_returns_exact_root_unchanged() {
        let p = counterexample_quartic::<f64>();
        let cfg = MultistartConfig::for_dimension(1);
        let rho = rho_from_x(&p, &[-1.0]).unwrap();
        let pair = newton_refine(&p, &[-1.0], rho, &cfg).unwrap();
        assert_eq!(pair.x, vec![-1.0]);
        assert_eq!(pair.rho, rho);
    }

    #[test]
    fn multistart_finds_exactly_two_quartic_pairs() {
        let p = counterexample_quartic::<f64>();
        let set = multistart_solve(&p, &MultistartConfig::for_dimension(1)).unwrap();
        assert_eq!(set.pairs.len(), 2);
        assert!((set.pairs[0].x[0] + 1.0).abs() < 1e-10);
        assert!((set.pairs[0].rho - 4.0).abs() < 1e-10);
        assert!((set.pairs[1].x[0] - 1.0).abs() < 1e-10);
        assert!((set.pairs[1].rho - 44.0 / 5.0).abs() < 1e-10);
        assert_eq!(set.groups.len(), 2);
        let l = set.largest_group().unwrap();
        assert_eq!(l.members, vec![1]);
        assert!(set.nonpositive_rho_pairs.is_empty());
    }

    #[test]
    fn multistart_groups_axis_quadratic() {
        let p = axis_quadratic_2d::<f64>();
        let set = multistart_solve(&p, &MultistartConfig::for_dimension(2)).unwrap();
        assert_eq!(set.pairs.len(), 4);
        assert_eq!(set.groups.len(), 2);
        assert!((set.groups[0].rho - 2.0).abs() < 1e-9);
        assert!((set.groups[1].rho - 4.0).abs() < 1e-9);
        assert_eq!(set.groups[0].members.len(), 2);
        assert_eq!(set.groups[1].members.len(), 2);
        // rho = 2 group is (+-1, 0); rho = 4 group is (0, +-1)
        for &i in &set.groups[0].members {
            assert!((set.pairs[i].x[0].abs() - 1.0).abs() < 1e-9);
            assert!(set.pairs[i].x[1].abs() < 1e-9);
        }
        for &i in &set.groups[1].members {
            assert!(set.pairs[i].x[0].abs() < 1e-9);
            assert!((set.pairs[i].x[1].abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn multistart_flags_continuum() {
        let p = radial_quadratic_2d::<f64>();
        let err = multistart_solve(&p, &MultistartConfig::for_dimension(2)).unwrap_err();
        assert!(matches!(err, Error::SuspectedContinuum { cap: 64, .. }));
    }

    #[test]
    fn multistart_respects_invariants() {
        let p = counterexample_quartic::<f64>();
        let cfg = MultistartConfig::for_dimension(1);
        let set = multistart_solve(&p, &cfg).unwrap();
        for pair in &set.pairs {
            let r = kkt_residual(&p, &pair.x, pair.rho).unwrap();
            assert!(r.inf_norm() <= cfg.newton_tol);
            assert!((dot(&pair.x, &pair.x) - 1.0).abs() <= cfg.newton_tol);
            assert!(pair.rho > cfg.rho_positivity_floor);
        }
        for w in set.groups.windows(2) {
            assert!(w[1].rho > w[0].rho);
        }
    }

    #[test]
    fn multistart_is_deterministic() {
        let p = axis_quadratic_2d::<f64>();
        let cfg = MultistartConfig::for_dimension(2);
        let a = multistart_solve(&p, &cfg).unwrap();
        let b = multistart_solve(&p, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn even_objective_yields_symmetric_roots() {
        let p = axis_quadratic_2d::<f64>();
        let cfg = MultistartConfig::for_dimension(2);
        let set = multistart_solve(&p, &cfg).unwrap();
        for pair in &set.pairs {
            let mirrored: Vec<f64> = pair.x.iter().map(|v| -v).collect();
            let found = set.pairs.iter().any(|other| {
                let dx: Vec<f64> =
                    other.x.iter().zip(&mirrored).map(|(a, b)| a - b).collect();
                inf_norm(&dx) <= cfg.dedup_tol && (other.rho - pair.rho).abs() <= cfg.dedup_tol
            });
            assert!(found, "mirror of {:?} missing", pair.x);
        }
    }

    #[test]
    fn nonpositive_roots_reported_separately() {
        // P(x) = +x^2 is convex; both sphere points give rho = -2.
        let p = crate::objective::PolynomialFunction::<f64>::univariate(&[0.0, 0.0, 1.0]).unwrap();
        let set = multistart_solve(&p, &MultistartConfig::for_dimension(1)).unwrap();
        assert!(set.pairs.is_empty());
        assert!(set.largest_group().is_none());
        assert_eq!(set.nonpositive_rho_pairs.len(), 2);
        for pair in &set.nonpositive_rho_pairs {
            assert!((pair.rho + 2.0).abs() < 1e-10);
        }
    }
}
