//! Built-in test objectives used by the command-line tools and the test
//! suites.

use crate::objective::{Monomial, PolynomialFunction};
use crate::scalar::{cast, Scalar};

/// The quartic `-x^4 - (8/5)x^3 - (6/5)x^2 + (12/5)x`, strictly concave on
/// all of `R`. On the unit ball it has exactly two stationary pairs,
/// `(-1, 4)` and `(1, 44/5)`; the dual-curvature criterion designates the
/// pair with the largest multiplier even though the global minimum is at
/// `x = -1`, which makes this the crate's standard counterexample.
pub fn counterexample_quartic<F: Scalar>() -> PolynomialFunction<F> {
    PolynomialFunction::univariate(&[
        F::zero(),
        cast(12.0 / 5.0),
        cast(-6.0 / 5.0),
        cast(-8.0 / 5.0),
        cast(-1.0),
    ])
    .expect("valid univariate polynomial")
}

/// `-x^2 - x`: a concave parabola whose largest-multiplier pair is certified
/// by the convexification check and really is the global minimizer.
pub fn shifted_parabola<F: Scalar>() -> PolynomialFunction<F> {
    PolynomialFunction::univariate(&[F::zero(), cast(-1.0), cast(-1.0)])
        .expect("valid univariate polynomial")
}

/// `-x1^2 - 2 x2^2`: an axis-aligned concave quadratic in two variables.
/// Its shifted hessian is only positive semidefinite at the largest
/// multiplier, so it exercises the relaxed (semidefinite) certificate.
pub fn axis_quadratic_2d<F: Scalar>() -> PolynomialFunction<F> {
    PolynomialFunction::new(
        2,
        [
            Monomial::new(cast(-1.0), vec![2, 0]),
            Monomial::new(cast(-2.0), vec![0, 2]),
        ],
    )
    .expect("valid polynomial")
}

/// `-x^T x` in two variables: every unit vector is stationary with the same
/// multiplier, so multistart reports a suspected continuum.
pub fn radial_quadratic_2d<F: Scalar>() -> PolynomialFunction<F> {
    PolynomialFunction::new(
        2,
        [
            Monomial::new(cast(-1.0), vec![2, 0]),
            Monomial::new(cast(-1.0), vec![0, 2]),
        ],
    )
    .expect("valid polynomial")
}
