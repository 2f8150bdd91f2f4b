//! Objective representations: sparse multivariate polynomials with exact
//! symbolic differentiation, a generic twice-differentiable function
//! contract, and central finite-difference oracles for validation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::{cast, Scalar};

/// Default step for the central finite-difference oracles.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A single term `coeff * prod_j x_j^powers[j]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Monomial<F> {
    pub coeff: F,
    pub powers: Vec<u32>,
}

impl<F: Scalar> Monomial<F> {
    pub fn new(coeff: F, powers: Vec<u32>) -> Self {
        Self { coeff, powers }
    }

    fn eval(&self, x: &[F]) -> F {
        self.powers
            .iter()
            .zip(x)
            .fold(self.coeff, |acc, (&p, &xi)| acc * xi.powi(p as i32))
    }

    fn degree(&self) -> u32 {
        self.powers.iter().sum()
    }
}

/// Sparse multivariate polynomial in canonical form: terms sorted
/// lexicographically by exponent vector, duplicate exponent vectors merged,
/// exact-zero coefficients dropped. Canonical form makes `PartialEq`
/// meaningful.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialFunction<F> {
    dimension: usize,
    terms: Vec<Monomial<F>>,
}

impl<F: Scalar> PolynomialFunction<F> {
    /// Builds a canonicalized polynomial. Every term's exponent vector must
    /// have length `dimension` and every coefficient must be finite.
    pub fn new(dimension: usize, terms: impl IntoIterator<Item = Monomial<F>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("polynomial dimension must be positive".into()));
        }
        let mut terms: Vec<Monomial<F>> = terms.into_iter().collect();
        for t in &terms {
            if t.powers.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    actual: t.powers.len(),
                });
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidInput("polynomial coefficient must be finite".into()));
            }
        }
        terms.sort_by(|a, b| a.powers.cmp(&b.powers));
        let mut canonical: Vec<Monomial<F>> = Vec::with_capacity(terms.len());
        for t in terms {
            match canonical.last_mut() {
                Some(last) if last.powers == t.powers => last.coeff = last.coeff + t.coeff,
                _ => canonical.push(t),
            }
        }
        canonical.retain(|t| t.coeff != F::zero());
        Ok(Self { dimension, terms: canonical })
    }

    /// The zero polynomial in `dimension` variables.
    pub fn zero(dimension: usize) -> Self {
        Self { dimension, terms: Vec::new() }
    }

    /// Univariate polynomial from coefficients in ascending power order.
    pub fn univariate(coeffs: &[F]) -> Result<Self> {
        Self::new(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(p, &c)| Monomial::new(c, vec![p as u32])),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn terms(&self) -> &[Monomial<F>] {
        &self.terms
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Evaluates the polynomial, summing terms in canonical order so the
    /// result is reproducible bit for bit.
    pub fn eval(&self, x: &[F]) -> Result<F> {
        self.check_point(x)?;
        Ok(self.terms.iter().fold(F::zero(), |acc, t| acc + t.eval(x)))
    }

    /// Exact partial derivative with respect to variable `var_index`.
    pub fn differentiate(&self, var_index: usize) -> Result<Self> {
        if var_index >= self.dimension {
            return Err(Error::InvalidInput(format!(
                "variable index {var_index} out of range for dimension {}",
                self.dimension
            )));
        }
        Self::new(
            self.dimension,
            self.terms.iter().filter(|t| t.powers[var_index] > 0).map(|t| {
                let p = t.powers[var_index];
                let mut powers = t.powers.clone();
                powers[var_index] = p - 1;
                Monomial::new(t.coeff * cast::<F>(p as f64), powers)
            }),
        )
    }

    /// Sums this polynomial with `other` (same dimension required).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dimension != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: other.dimension,
            });
        }
        Self::new(self.dimension, self.terms.iter().chain(&other.terms).cloned())
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&self, factor: F) -> Self {
        Self::new(
            self.dimension,
            self.terms
                .iter()
                .map(|t| Monomial::new(t.coeff * factor, t.powers.clone())),
        )
        .expect("scaling preserves validity")
    }

    fn check_point(&self, x: &[F]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, actual: x.len() });
        }
        Ok(())
    }
}

/// A twice continuously differentiable objective on `R^n`.
///
/// [`PolynomialFunction`] implements this with exact derivatives; callers may
/// implement it for opaque objectives, in which case the finite-difference
/// oracles below are the only independent correctness check available.
pub trait SmoothFunction<F: Scalar> {
    fn dimension(&self) -> usize;

    fn value(&self, x: &[F]) -> Result<F>;

    fn gradient(&self, x: &[F]) -> Result<Vec<F>>;

    /// Hessian matrix; implementations must return an exactly symmetric matrix.
    fn hessian(&self, x: &[F]) -> Result<SquareMatrix<F>>;

    /// The hessian when it is constant over all of `R^n`, otherwise `None`.
    /// Constant hessians let the certificate checkers give exact verdicts.
    fn hessian_if_constant(&self) -> Option<SquareMatrix<F>> {
        None
    }
}

impl<F: Scalar> SmoothFunction<F> for PolynomialFunction<F> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, x: &[F]) -> Result<F> {
        self.eval(x)
    }

    fn gradient(&self, x: &[F]) -> Result<Vec<F>> {
        self.check_point(x)?;
        (0..self.dimension)
            .map(|i| self.differentiate(i)?.eval(x))
            .collect()
    }

    fn hessian(&self, x: &[F]) -> Result<SquareMatrix<F>> {
        self.check_point(x)?;
        let n = self.dimension;
        let mut h = SquareMatrix::zeros(n);
        for i in 0..n {
            let di = self.differentiate(i)?;
            for j in i..n {
                let v = di.differentiate(j)?.eval(x)?;
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        Ok(h)
    }

    fn hessian_if_constant(&self) -> Option<SquareMatrix<F>> {
        if self.degree() <= 2 {
            let origin = vec![F::zero(); self.dimension];
            Some(self.hessian(&origin).expect("origin has the right dimension"))
        } else {
            None
        }
    }
}

/// Central finite-difference gradient, for validation only.
pub fn fd_gradient<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    f: &P,
    x: &[F],
    h: F,
) -> Result<Vec<F>> {
    if h <= F::zero() {
        return Err(Error::InvalidInput("finite-difference step must be positive".into()));
    }
    let n = f.dimension();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
    }
    let two = cast::<F>(2.0);
    let mut g = Vec::with_capacity(n);
    let mut probe = x.to_vec();
    for i in 0..n {
        probe[i] = x[i] + h;
        let plus = f.value(&probe)?;
        probe[i] = x[i] - h;
        let minus = f.value(&probe)?;
        probe[i] = x[i];
        g.push((plus - minus) / (two * h));
    }
    Ok(g)
}

/// Central finite-difference hessian built from function values only, so it
/// is independent of both the gradient and the hessian implementations.
pub fn fd_hessian<F: Scalar, P: SmoothFunction<F> + ?Sized>(
    f: &P,
    x: &[F],
    h: F,
) -> Result<SquareMatrix<F>> {
    if h <= F::zero() {
        return Err(Error::InvalidInput("finite-difference step must be positive".into()));
    }
    let n = f.dimension();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
    }
    let two = cast::<F>(2.0);
    let four = cast::<F>(4.0);
    let center = f.value(x)?;
    let mut m = SquareMatrix::zeros(n);
    let mut probe = x.to_vec();
    for i in 0..n {
        probe[i] = x[i] + h;
        let plus = f.value(&probe)?;
        probe[i] = x[i] - h;
        let minus = f.value(&probe)?;
        probe[i] = x[i];
        m[(i, i)] = (plus - two * center + minus) / (h * h);
        for j in (i + 1)..n {
            probe[i] = x[i] + h;
            probe[j] = x[j] + h;
            let pp = f.value(&probe)?;
            probe[j] = x[j] - h;
            let pm = f.value(&probe)?;
            probe[i] = x[i] - h;
            let mm = f.value(&probe)?;
            probe[j] = x[j] + h;
            let mp = f.value(&probe)?;
            probe[i] = x[i];
            probe[j] = x[j];
            let v = (pp - pm - mp + mm) / (four * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}
