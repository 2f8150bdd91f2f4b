//! Brute-force grid search over the unit ball, used as independent ground
//! truth for the certificate and designation machinery in low dimensions.
//!
//! Two grids are scanned: an axis-aligned lattice over `[-1, 1]^n` restricted
//! to the ball, and an angular grid of the unit sphere. A concave objective
//! attains its ball minimum on the sphere, so the angular grid is the sharp
//! one; the lattice guards against objectives that are not actually concave.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::SmoothFunction;
use crate::scalar::{cast, Scalar};
use crate::stationary::StationarySet;

/// Grid resolution and the dimension cap for exhaustive search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub points_per_axis: usize,
    pub dimension_limit: usize,
}

impl GridSpec {
    /// Default resolutions: 20001 points for one variable, 1501 for two,
    /// 201 for three.
    pub fn for_dimension(n: usize) -> Self {
        let points_per_axis = match n {
            0 | 1 => 20_001,
            2 => 1_501,
            _ => 201,
        };
        Self { points_per_axis, dimension_limit: 3 }
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_axis < 3 {
            return Err(Error::InvalidInput("grid needs at least 3 points per axis".into()));
        }
        Ok(())
    }
}

/// Best grid point found by [`global_min_grid`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult<F> {
    pub argmin: Vec<F>,
    pub min_value: F,
    /// Axis lattice spacing `2 / (points_per_axis - 1)`.
    pub grid_resolution: F,
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

struct Best<F> {
    value: F,
    point: Vec<F>,
}

impl<F: Scalar> Best<F> {
    fn consider(&mut self, value: F, point: &[F]) {
        if value < self.value || (value == self.value && lex_less(point, &self.point)) {
            self.value = value;
            self.point = point.to_vec();
        }
    }
}

/// Exhaustive minimization of the objective over the closed unit ball.
///
/// Ties are broken toward the lexicographically smallest point. Rejects
/// dimensions above `grid.dimension_limit`; use multistart plus certificates
/// there instead.
pub fn global_min_grid<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    grid: &GridSpec,
) -> Result<OracleResult<F>> {
    grid.validate()?;
    let n = problem.dimension();
    if n > grid.dimension_limit {
        return Err(Error::InvalidInput(format!(
            "grid oracle supports at most {} dimensions (got {n}); \
             use multistart and the certificate checks for larger problems",
            grid.dimension_limit
        )));
    }

    let p = grid.points_per_axis;
    let spacing = cast::<F>(2.0 / (p as f64 - 1.0));
    let ball_bound = F::one() + cast(1e-12);

    let mut best = Best { value: F::infinity(), point: vec![F::zero(); n] };

    // axis-aligned lattice over [-1, 1]^n, restricted to the ball
    let axis: Vec<F> = (0..p)
        .map(|k| (-F::one() + cast::<F>(k as f64) * spacing).min(F::one()))
        .collect();
    let mut idx = vec![0usize; n];
    let mut point = vec![F::zero(); n];
    'outer: loop {
        for (d, &k) in idx.iter().enumerate() {
            point[d] = axis[k];
        }
        let norm_sq = point.iter().fold(F::zero(), |acc, &v| acc + v * v);
        if norm_sq <= ball_bound {
            best.consider(problem.value(&point)?, &point);
        }
        // odometer increment
        let mut d = n;
        loop {
            if d == 0 {
                break 'outer;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < p {
                break;
            }
            idx[d] = 0;
        }
    }

    // angular grid of the unit sphere
    match n {
        1 => {
            for x in [-F::one(), F::one()] {
                best.consider(problem.value(&[x])?, &[x]);
            }
        }
        2 => {
            let m = 4 * (p - 1);
            let tau = cast::<F>(std::f64::consts::TAU);
            for k in 0..m {
                let angle = tau * cast::<F>(k as f64) / cast::<F>(m as f64);
                let point = [angle.cos(), angle.sin()];
                best.consider(problem.value(&point)?, &point);
            }
        }
        3 => {
            let polar_count = 2 * (p - 1) + 1;
            let azimuth_count = 4 * (p - 1);
            let pi = cast::<F>(std::f64::consts::PI);
            let tau = cast::<F>(std::f64::consts::TAU);
            for i in 0..polar_count {
                let polar = pi * cast::<F>(i as f64) / cast::<F>((polar_count - 1) as f64);
                let (sin_p, cos_p) = (polar.sin(), polar.cos());
                for k in 0..azimuth_count {
                    let azimuth = tau * cast::<F>(k as f64) / cast::<F>(azimuth_count as f64);
                    let point = [sin_p * azimuth.cos(), sin_p * azimuth.sin(), cos_p];
                    best.consider(problem.value(&point)?, &point);
                }
            }
        }
        _ => {}
    }

    Ok(OracleResult { argmin: best.point, min_value: best.value, grid_resolution: spacing })
}

/// A designated point that the oracle contradicts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefutationRecord<F> {
    pub designee_x: Vec<F>,
    pub designee_value: F,
    pub oracle_argmin: Vec<F>,
    pub oracle_value: F,
    /// `designee_value - oracle_value`, positive when the designee is not
    /// globally minimal.
    pub gap: F,
}

/// Stationary values versus the grid oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport<F> {
    /// Objective value at each stationary pair, in set order.
    pub pair_values: Vec<F>,
    /// Index of the pair with the smallest value.
    pub best_pair_index: usize,
    /// Index of the largest-multiplier group (the designee of the
    /// dual-curvature criterion).
    pub designee_group_index: usize,
    /// Smallest value over the designee group, with its point.
    pub designee_x: Vec<F>,
    pub designee_value: F,
    /// Designee value within `value_tol` of the oracle minimum.
    pub designee_matches_oracle: bool,
    pub refutation: Option<RefutationRecord<F>>,
}

/// Default tolerance for designee-versus-oracle value matching.
pub const DEFAULT_VALUE_TOL: f64 = 1e-3;

/// Compares every stationary pair's value against the oracle minimum and
/// reports whether the largest-multiplier designee actually is the global
/// minimizer; when it is not, emits a refutation record with the gap.
pub fn compare_candidates<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    set: &StationarySet<F>,
    oracle: &OracleResult<F>,
    value_tol: F,
) -> Result<ComparisonReport<F>> {
    if set.is_empty() {
        return Err(Error::InvalidInput("comparison requires a nonempty stationary set".into()));
    }
    let mut pair_values = Vec::with_capacity(set.pairs.len());
    for pair in &set.pairs {
        pair_values.push(problem.value(&pair.x)?);
    }
    let best_pair_index = pair_values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).expect("finite values"))
        .map(|(i, _)| i)
        .expect("nonempty set");

    let designee_group_index = set.largest_index.expect("nonempty set has groups");
    let group = &set.groups[designee_group_index];
    let mut designee_value = F::infinity();
    let mut designee_x: Vec<F> = Vec::new();
    for &i in &group.members {
        if pair_values[i] < designee_value {
            designee_value = pair_values[i];
            designee_x = set.pairs[i].x.clone();
        }
    }

    let designee_matches_oracle = (designee_value - oracle.min_value).abs() <= value_tol;
    let refutation = if designee_matches_oracle {
        None
    } else {
        Some(RefutationRecord {
            designee_x: designee_x.clone(),
            designee_value,
            oracle_argmin: oracle.argmin.clone(),
            oracle_value: oracle.min_value,
            gap: designee_value - oracle.min_value,
        })
    };

    Ok(ComparisonReport {
        pair_values,
        best_pair_index,
        designee_group_index,
        designee_x,
        designee_value,
        designee_matches_oracle,
        refutation,
    })
}
