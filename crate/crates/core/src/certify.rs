//! Positive-definiteness certificates for global minimality, strict-concavity
//! checks, and the symmetric eigensolver behind them.
//!
//! The certified route: if `hess P(x) + rho I` is positive definite on the
//! closed unit ball at the largest stationary multiplier, the corresponding
//! pair is a global minimizer, because `P + (rho/2)|.|^2` is then convex on an
//! open set containing the ball and stationary at that pair. The relaxed
//! variant accepts positive *semi*definiteness on a slightly larger ball and
//! any on-sphere stationary point with nonnegative multiplier.
//!
//! Verdict vocabulary is deliberately honest about what sampling can prove:
//!
//! * `certified_exact`  - the hessian is constant, one eigenvalue decides;
//! * `certified_sampled` - the minimum sampled eigenvalue clears the margin
//!   floor; supporting evidence, not a proof, for non-constant hessians;
//! * `refuted`          - a concrete witness point violates the condition,
//!   which *is* conclusive;
//! * `inconclusive`     - the sampled minimum sits inside the margin band.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inf_norm, SquareMatrix};
use crate::objective::SmoothFunction;
use crate::sampling::{ball_points, sphere_points};
use crate::scalar::{cast, Scalar};
use crate::stationary::{RhoGroup, StationarySet, SPHERE_TOL};

/// Sampled eigenvalues this close to zero are neither certified nor refuted.
pub const MARGIN_FLOOR: f64 = 1e-8;

/// Slack around zero for exact semidefinite decisions, absorbing eigensolver
/// rounding on constant hessians.
const SEMIDEFINITE_SLACK: f64 = 1e-12;

/// How a definiteness condition was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedExact,
    CertifiedSampled,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn is_certified(self) -> bool {
        matches!(self, Verdict::CertifiedExact | Verdict::CertifiedSampled)
    }
}

/// Strict demands positive definiteness on the unit ball; relaxed accepts
/// positive semidefiniteness on a ball of radius greater than one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    Strict,
    Relaxed,
}

/// Seeded sampling plan for eigenvalue scans over a ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallSampling<F> {
    /// Ball radius; 1 for the strict condition, above 1 for the relaxed one.
    pub radius: F,
    pub sample_count: usize,
    pub seed: u64,
    /// Also scan quasi-uniform points on the bounding sphere, where the
    /// interesting violations usually live.
    pub include_boundary: bool,
}

impl<F: Scalar> BallSampling<F> {
    /// Unit-ball sampling scaled to the dimension.
    pub fn for_dimension(n: usize) -> Self {
        Self { radius: F::one(), sample_count: 4096 * n.max(1), seed: 0, include_boundary: true }
    }

    /// Sampling for the relaxed condition: radius `1 + 1/16`.
    pub fn relaxed_for_dimension(n: usize) -> Self {
        Self { radius: F::one() + cast(1.0 / 16.0), ..Self::for_dimension(n) }
    }

    fn validate(&self) -> Result<()> {
        if self.radius < F::one() || self.sample_count == 0 {
            return Err(Error::InvalidInput(
                "ball sampling requires radius >= 1 and a positive sample count".into(),
            ));
        }
        Ok(())
    }

    /// Ball samples plus, when requested, boundary sphere points matching the
    /// multistart start set in size.
    fn points(&self, n: usize) -> Vec<Vec<F>> {
        let mut pts = ball_points::<F>(n, self.sample_count, self.radius, self.seed);
        if self.include_boundary {
            let boundary_count = 64.max(32 * n);
            for p in sphere_points::<F>(n, boundary_count, self.seed) {
                pts.push(p.iter().map(|&v| v * self.radius).collect());
            }
        }
        pts
    }
}

/// A candidate `(x_bar, rho_bar)` for the relaxed certificate: an on-sphere
/// stationary point with nonnegative multiplier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateQuery<F> {
    pub x_bar: Vec<F>,
    pub rho_bar: F,
    pub mode: CertificateMode,
}

/// Outcome of a definiteness scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateResult<F> {
    pub verdict: Verdict,
    /// The decisive eigenvalue: the smallest `lambda_min(hess P + rho I)`
    /// found for convexification checks, the largest `lambda_max(hess P)`
    /// found for concavity checks.
    pub extreme_eigenvalue: F,
    /// Sample point attaining the decisive eigenvalue.
    pub witness_point: Vec<F>,
    /// Signed distance from the zero boundary in the certified direction;
    /// negative exactly when the condition is violated at the witness.
    pub margin: F,
    /// Present when the verdict was reached exactly.
    pub exactness_reason: Option<String>,
}

/// Designation produced by a certified verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignatedMinimizer<F> {
    /// Index of the multiplier group in the stationary set, when one matches.
    pub group_index: Option<usize>,
    /// Pair indices covered by the designation.
    pub pair_indices: Vec<usize>,
    /// Representative minimizer (the group member with the smallest value).
    pub representative_x: Vec<F>,
    /// Objective value at the representative.
    pub value: F,
}

/// Certificate evaluated at the largest multiplier (or at a query point),
/// with the designation it licenses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateOutcome<F> {
    pub mode: CertificateMode,
    /// Multiplier at which the shifted hessian was tested.
    pub rho: F,
    pub certificate: CertificateResult<F>,
    /// Populated only when the certificate is certified.
    pub designated: Option<DesignatedMinimizer<F>>,
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver (cyclic Jacobi)
// ---------------------------------------------------------------------------

fn check_symmetric<F: Scalar>(m: &SquareMatrix<F>) -> Result<()> {
    if m.dim() == 0 {
        return Err(Error::InvalidInput("eigensolver requires a nonempty matrix".into()));
    }
    if m.max_asymmetry() > cast(1e-12) {
        return Err(Error::InvalidInput("matrix is not symmetric".into()));
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn sym_eigenvalues<F: Scalar>(m: &SquareMatrix<F>) -> Result<Vec<F>> {
    check_symmetric(m)?;
    let n = m.dim();
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut a = m.clone();
    let threshold = F::epsilon() * cast::<F>(4.0) * (F::one() + a.inf_norm());
    let two = cast::<F>(2.0);

    for _sweep in 0..100 {
        let mut max_off = F::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(a[(p, q)].abs());
            }
        }
        if max_off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= threshold {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
                let t = {
                    let mag = theta.abs() + (F::one() + theta * theta).sqrt();
                    if theta >= F::zero() {
                        F::one() / mag
                    } else {
                        -F::one() / mag
                    }
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<F> = (0..n).map(|i| a[(i, i)]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eigs)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eig_sym<F: Scalar>(m: &SquareMatrix<F>) -> Result<F> {
    Ok(*sym_eigenvalues(m)?.first().expect("nonempty spectrum"))
}

/// Largest eigenvalue of a symmetric matrix.
pub fn max_eig_sym<F: Scalar>(m: &SquareMatrix<F>) -> Result<F> {
    Ok(*sym_eigenvalues(m)?.last().expect("nonempty spectrum"))
}

// ---------------------------------------------------------------------------
// Definiteness scans
// ---------------------------------------------------------------------------

fn classify<F: Scalar>(
    margin: F,
    exact: bool,
    mode: CertificateMode,
    extreme: F,
    witness: Vec<F>,
    exactness_reason: Option<String>,
) -> CertificateResult<F> {
    let slack = cast::<F>(SEMIDEFINITE_SLACK);
    let floor = cast::<F>(MARGIN_FLOOR);
    let verdict = match (exact, mode) {
        (true, CertificateMode::Strict) => {
            if margin > slack {
                Verdict::CertifiedExact
            } else if margin < -slack {
                Verdict::Refuted
            } else {
                // exactly semidefinite: not strictly definite, not violated
                Verdict::Inconclusive
            }
        }
        (true, CertificateMode::Relaxed) => {
            if margin >= -slack {
                Verdict::CertifiedExact
            } else {
                Verdict::Refuted
            }
        }
        (false, CertificateMode::Strict) => {
            if margin > floor {
                Verdict::CertifiedSampled
            } else if margin < F::zero() {
                Verdict::Refuted
            } else {
                Verdict::Inconclusive
            }
        }
        (false, CertificateMode::Relaxed) => {
            if margin >= -slack {
                Verdict::CertifiedSampled
            } else {
                Verdict::Refuted
            }
        }
    };
    CertificateResult { verdict, extreme_eigenvalue: extreme, witness_point: witness, margin, exactness_reason }
}

/// Scans `lambda_min(hess P(x) + rho I)` over the sampled ball and classifies
/// the convexification condition. Constant-hessian objectives are decided
/// exactly from a single eigenvalue.
pub fn check_convexification<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    rho: F,
    sampling: &BallSampling<F>,
    mode: CertificateMode,
) -> Result<CertificateResult<F>> {
    sampling.validate()?;
    let n = problem.dimension();

    if let Some(hess) = problem.hessian_if_constant() {
        let eig = min_eig_sym(&hess.add_scaled_identity(rho))?;
        return Ok(classify(
            eig,
            true,
            mode,
            eig,
            vec![F::zero(); n],
            Some("constant hessian".into()),
        ));
    }

    let mut best = F::infinity();
    let mut witness = vec![F::zero(); n];
    for point in sampling.points(n) {
        let eig = min_eig_sym(&problem.hessian(&point)?.add_scaled_identity(rho))?;
        if eig < best {
            best = eig;
            witness = point;
        }
    }
    Ok(classify(best, false, mode, best, witness, None))
}

/// Scans `lambda_max(hess P(x))` over the sampled ball and checks that it
/// stays strictly negative; same verdict vocabulary as
/// [`check_convexification`] with the signs flipped.
pub fn check_strict_concavity<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    sampling: &BallSampling<F>,
) -> Result<CertificateResult<F>> {
    sampling.validate()?;
    let n = problem.dimension();

    if let Some(hess) = problem.hessian_if_constant() {
        let eig = max_eig_sym(&hess)?;
        return Ok(classify(
            -eig,
            true,
            CertificateMode::Strict,
            eig,
            vec![F::zero(); n],
            Some("constant hessian".into()),
        ));
    }

    let mut worst = F::neg_infinity();
    let mut witness = vec![F::zero(); n];
    for point in sampling.points(n) {
        let eig = max_eig_sym(&problem.hessian(&point)?)?;
        if eig > worst {
            worst = eig;
            witness = point;
        }
    }
    Ok(classify(-worst, false, CertificateMode::Strict, worst, witness, None))
}

fn designate<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    set: &StationarySet<F>,
    group_index: Option<usize>,
    group: &RhoGroup<F>,
) -> Result<DesignatedMinimizer<F>> {
    let mut best_value = F::infinity();
    let mut best_x: Vec<F> = Vec::new();
    for &i in &group.members {
        let v = problem.value(&set.pairs[i].x)?;
        if v < best_value {
            best_value = v;
            best_x = set.pairs[i].x.clone();
        }
    }
    Ok(DesignatedMinimizer {
        group_index,
        pair_indices: group.members.clone(),
        representative_x: best_x,
        value: best_value,
    })
}

/// Runs the convexification certificate and, when it certifies, designates a
/// global minimizer.
///
/// With `query = None` the shifted hessian is tested at the largest group's
/// multiplier and that group is designated. A query supplies an explicit
/// on-sphere stationary candidate `(x_bar, rho_bar >= 0)` for the relaxed
/// condition; certification designates the matching multiplier group when one
/// exists, otherwise the query point itself.
pub fn certify_global_minimizer<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    set: &StationarySet<F>,
    sampling: &BallSampling<F>,
    mode: CertificateMode,
    query: Option<&CertificateQuery<F>>,
) -> Result<CertificateOutcome<F>> {
    if set.is_empty() && query.is_none() {
        return Err(Error::InvalidInput(
            "certificate requires a nonempty stationary set or an explicit query".into(),
        ));
    }

    let (rho, mode) = match query {
        None => {
            let group = set.largest_group().expect("nonempty set has a largest group");
            (group.rho, mode)
        }
        Some(q) => {
            validate_query(problem, q)?;
            (q.rho_bar, q.mode)
        }
    };

    let certificate = check_convexification(problem, rho, sampling, mode)?;

    let designated = if certificate.verdict.is_certified() {
        match query {
            None => {
                let idx = set.largest_index;
                let group = set.largest_group().expect("nonempty set has a largest group");
                Some(designate(problem, set, idx, group)?)
            }
            Some(q) => {
                let tie = cast::<F>(1e-8);
                let matching = set
                    .groups
                    .iter()
                    .enumerate()
                    .find(|(_, g)| (g.rho - q.rho_bar).abs() <= tie);
                match matching {
                    Some((gi, group)) => Some(designate(problem, set, Some(gi), group)?),
                    None => Some(DesignatedMinimizer {
                        group_index: None,
                        pair_indices: vec![],
                        representative_x: q.x_bar.clone(),
                        value: problem.value(&q.x_bar)?,
                    }),
                }
            }
        }
    } else {
        None
    };

    Ok(CertificateOutcome { mode, rho, certificate, designated })
}

fn validate_query<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    problem: &P,
    q: &CertificateQuery<F>,
) -> Result<()> {
    let n = problem.dimension();
    if q.x_bar.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: q.x_bar.len() });
    }
    let sphere_gap = (crate::linalg::dot(&q.x_bar, &q.x_bar) - F::one()).abs();
    if sphere_gap > cast(SPHERE_TOL) {
        return Err(Error::InvalidInput("query point must lie on the unit sphere".into()));
    }
    match q.mode {
        CertificateMode::Relaxed if q.rho_bar < F::zero() => {
            return Err(Error::InvalidInput("query multiplier must be nonnegative".into()));
        }
        CertificateMode::Strict if q.rho_bar <= F::zero() => {
            return Err(Error::InvalidInput("strict query multiplier must be positive".into()));
        }
        _ => {}
    }
    let grad = problem.gradient(&q.x_bar)?;
    let residual: Vec<F> =
        grad.iter().zip(&q.x_bar).map(|(&g, &x)| g + q.rho_bar * x).collect();
    if inf_norm(&residual) > cast(1e-8) {
        return Err(Error::InvalidInput(
            "query point is not stationary at the supplied multiplier".into(),
        ));
    }
    Ok(())
}
