//! Deterministic low-discrepancy point generators for the unit sphere and
//! the closed ball.
//!
//! Points come from a Kronecker (additive-recurrence) sequence whose
//! irrational steps are powers of the generalized golden ratio, shifted by a
//! seed-derived offset. Sphere directions are obtained by pushing the
//! coordinates through the inverse normal CDF and normalizing; ball radii use
//! the usual `u^(1/n)` volume correction. In one dimension the sphere is just
//! `{-1, +1}` and the ball generator degenerates to a shifted uniform lattice,
//! which has optimal discrepancy there.

use crate::scalar::{cast, Scalar};

/// splitmix64 step, used to derive per-coordinate shifts from a seed.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_shift(state: &mut u64) -> f64 {
    // 53 high bits -> [0, 1)
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Irrational step vector for the d-dimensional Kronecker sequence:
/// `alpha_j = 1 / phi_d^(j+1)` where `phi_d` is the positive root of
/// `x^(d+1) = x + 1`.
fn kronecker_alphas(d: usize) -> Vec<f64> {
    let mut phi = 1.5f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
    }
    (0..d).map(|j| (1.0 / phi.powi(j as i32 + 1)).fract()).collect()
}

/// Low-discrepancy sequence in the unit cube `[0,1)^d`.
struct KroneckerSequence {
    alphas: Vec<f64>,
    shifts: Vec<f64>,
}

impl KroneckerSequence {
    fn new(d: usize, seed: u64) -> Self {
        let mut state = seed ^ 0xA511_E9B3_12F8_85C7;
        let shifts = (0..d).map(|_| unit_shift(&mut state)).collect();
        Self { alphas: kronecker_alphas(d), shifts }
    }

    fn point(&self, k: usize) -> Vec<f64> {
        self.alphas
            .iter()
            .zip(&self.shifts)
            .map(|(&a, &s)| (s + (k as f64 + 1.0) * a).fract())
            .collect()
    }
}

/// Inverse of the standard normal CDF (Acklam's rational approximation,
/// absolute error below 1.2e-9, ample for start-point generation).
fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let p = p.clamp(f64::EPSILON, 1.0 - f64::EPSILON);
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Deterministic quasi-uniform points on the unit sphere in `R^n`.
///
/// For `n = 1` the sphere is exactly `{-1, +1}` and `count` is ignored.
pub(crate) fn sphere_points<F: Scalar>(n: usize, count: usize, seed: u64) -> Vec<Vec<F>> {
    assert!(n >= 1, "sphere_points: dimension must be positive");
    if n == 1 {
        return vec![vec![-F::one()], vec![F::one()]];
    }
    let seq = KroneckerSequence::new(n, seed);
    (0..count)
        .map(|k| {
            let u = seq.point(k);
            let z: Vec<f64> = u.into_iter().map(inverse_normal_cdf).collect();
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-300 {
                let mut e1 = vec![F::zero(); n];
                e1[0] = F::one();
                return e1;
            }
            z.into_iter().map(|v| cast::<F>(v / norm)).collect()
        })
        .collect()
}

/// Deterministic quasi-uniform points in the closed ball of the given radius.
///
/// In one dimension this is a seed-shifted uniform lattice on `[-r, r]`
/// with exact spacing `2r / count`.
pub(crate) fn ball_points<F: Scalar>(n: usize, count: usize, radius: F, seed: u64) -> Vec<Vec<F>> {
    assert!(n >= 1, "ball_points: dimension must be positive");
    if n == 1 {
        let mut state = seed ^ 0x5851_F42D_4C95_7F2D;
        let shift = unit_shift(&mut state);
        let r = radius.to_f64().expect("radius converts to f64");
        return (0..count)
            .map(|k| {
                let u = (shift + (k as f64 + 0.5) / count as f64).fract();
                vec![cast::<F>(-r + 2.0 * r * u)]
            })
            .collect();
    }
    let seq = KroneckerSequence::new(n + 1, seed);
    let r = radius.to_f64().expect("radius converts to f64");
    (0..count)
        .map(|k| {
            let u = seq.point(k);
            let z: Vec<f64> = u[..n].iter().map(|&v| inverse_normal_cdf(v)).collect();
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-300 {
                return vec![F::zero(); n];
            }
            let rho = r * u[n].powf(1.0 / n as f64);
            z.into_iter().map(|v| cast::<F>(rho * v / norm)).collect()
        })
        .collect()
}
