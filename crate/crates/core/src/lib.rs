//! Global minimization of smooth strictly concave objectives over the closed
//! unit ball.
//!
//! The pipeline this crate implements:
//!
//! 1. [`stationary`] enumerates multiplier pairs `(x, rho)` solving
//!    `grad P(x) + rho x = 0` on the unit sphere with `rho > 0`, by seeded
//!    multistart Newton.
//! 2. [`dual`] evaluates the scalar dual function along a stationary branch
//!    together with its closed-form first and second derivatives, and checks
//!    the per-pair curvature hypotheses (nonsingular shifted hessian,
//!    positive dual curvature).
//! 3. [`branch`] traces the continuously differentiable branch through a pair
//!    by predictor-corrector continuation and provides the finite-difference
//!    oracle for the dual curvature.
//! 4. [`certify`] decides positive (semi)definiteness of the shifted hessian
//!    over the ball, which is what actually licenses a global-minimality
//!    designation, and checks strict concavity.
//! 5. [`oracle`] brute-forces the global minimum on a grid in low dimension
//!    as independent ground truth, and compares it against the designations.
//!
//! The built-in quartic of [`problems::counterexample_quartic`] is the
//! crate's standard demonstration: every pair satisfies the curvature
//! hypotheses, the largest-multiplier pair is designated by the curvature
//! criterion, and the oracle shows that designation wrong by a gap of 8/5,
//! while the definiteness certificate correctly refuses to certify it.
//!
//! All numerics are generic over the scalar type through [`Scalar`];
//! the aliases at the crate root fix `f64`, which is what the stated default
//! tolerances assume.

pub mod branch;
pub mod certify;
pub mod dual;
mod error;
pub mod linalg;
pub mod objective;
pub mod oracle;
pub mod problems;
mod sampling;
mod scalar;
pub mod stationary;
pub mod validate;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision aliases for the main entry types.
pub type Polynomial64 = objective::PolynomialFunction<f64>;
pub type Monomial64 = objective::Monomial<f64>;
pub type SquareMatrix64 = linalg::SquareMatrix<f64>;
pub type MultistartConfig64 = stationary::MultistartConfig<f64>;
pub type StationarySet64 = stationary::StationarySet<f64>;
pub type StationaryPair64 = stationary::StationaryPair<f64>;
pub type BranchTraceConfig64 = branch::BranchTraceConfig<f64>;
pub type BranchTrace64 = branch::BranchTrace<f64>;
pub type DualEvaluation64 = dual::DualEvaluation<f64>;
pub type BallSampling64 = certify::BallSampling<f64>;
pub type CertificateResult64 = certify::CertificateResult<f64>;
pub type CertificateOutcome64 = certify::CertificateOutcome<f64>;
pub type GridSpec64 = oracle::GridSpec;
pub type OracleResult64 = oracle::OracleResult<f64>;
