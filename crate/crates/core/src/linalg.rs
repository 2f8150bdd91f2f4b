//! Small dense linear algebra: square matrices, an LU solver with a
//! scale-aware singularity test, and vector helpers.
//!
//! Problem dimensions here are tiny (a handful of variables), so the
//! implementations favour clarity and reproducibility over blocking or SIMD.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

/// Relative pivot floor: a pivot with magnitude at or below
/// `SINGULAR_PIVOT_REL * inf_norm(A)` marks the matrix as numerically singular.
pub const SINGULAR_PIVOT_REL: f64 = 1e-12;

/// Dense square matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Scalar> SquareMatrix<F> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![F::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Returns a copy with `shift` added to the diagonal.
    pub fn add_scaled_identity(&self, shift: F) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] = out[(i, i)] + shift;
        }
        out
    }

    /// Matrix infinity norm (maximum absolute row sum).
    pub fn inf_norm(&self) -> F {
        let mut worst = F::zero();
        for i in 0..self.n {
            let mut row = F::zero();
            for j in 0..self.n {
                row = row + self[(i, j)].abs();
            }
            worst = worst.max(row);
        }
        worst
    }

    /// Largest absolute difference between the matrix and its transpose.
    pub fn max_asymmetry(&self) -> F {
        let mut worst = F::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).fold(F::zero(), |acc, j| acc + self[(i, j)] * x[j]))
            .collect()
    }
}

impl<F> Index<(usize, usize)> for SquareMatrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.n + j]
    }
}

impl<F> IndexMut<(usize, usize)> for SquareMatrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.n + j]
    }
}

/// Marker for a numerically singular matrix in [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Singular;

struct LuFactors<F> {
    lu: SquareMatrix<F>,
    perm: Vec<usize>,
}

/// LU factorization with partial pivoting. Fails when a pivot magnitude
/// drops to `SINGULAR_PIVOT_REL * inf_norm(A)` or below.
fn lu_factor<F: Scalar>(a: &SquareMatrix<F>) -> std::result::Result<LuFactors<F>, Singular> {
    let n = a.dim();
    let floor = cast::<F>(SINGULAR_PIVOT_REL) * a.inf_norm();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut best = k;
        let mut best_mag = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let mag = lu[(i, k)].abs();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag <= floor {
            return Err(Singular);
        }
        if best != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = tmp;
            }
            perm.swap(k, best);
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            for j in (k + 1)..n {
                lu[(i, j)] = lu[(i, j)] - factor * lu[(k, j)];
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

fn lu_substitute<F: Scalar>(f: &LuFactors<F>, b: &[F]) -> Vec<F> {
    let n = f.lu.dim();
    let mut y = vec![F::zero(); n];
    for i in 0..n {
        let mut acc = b[f.perm[i]];
        for (j, &yj) in y.iter().enumerate().take(i) {
            acc = acc - f.lu[(i, j)] * yj;
        }
        y[i] = acc;
    }
    for i in (0..n).rev() {
        let mut acc = y[i];
        for (j, &yj) in y.iter().enumerate().skip(i + 1) {
            acc = acc - f.lu[(i, j)] * yj;
        }
        y[i] = acc / f.lu[(i, i)];
    }
    y
}

/// Solves `A x = b` by partially pivoted LU followed by one step of
/// iterative refinement, which keeps the residual near `eps * |A| * |x|`
/// even for moderately ill-conditioned systems.
pub fn solve<F: Scalar>(a: &SquareMatrix<F>, b: &[F]) -> std::result::Result<Vec<F>, Singular> {
    assert_eq!(a.dim(), b.len(), "solve: rhs length must match matrix dimension");
    let factors = lu_factor(a)?;
    let mut x = lu_substitute(&factors, b);
    let ax = a.mul_vec(&x);
    let residual: Vec<F> = b.iter().zip(&ax).map(|(&bi, &axi)| bi - axi).collect();
    let correction = lu_substitute(&factors, &residual);
    for (xi, ci) in x.iter_mut().zip(&correction) {
        *xi = *xi + *ci;
    }
    Ok(x)
}

/// Determinant via Gaussian elimination with partial pivoting.
///
/// Unlike [`solve`] there is no pivot floor: an exactly zero pivot simply
/// yields 0, so near-singular matrices report their (tiny) determinant.
pub fn determinant<F: Scalar>(a: &SquareMatrix<F>) -> F {
    let n = a.dim();
    let mut m = a.clone();
    let mut det = F::one();
    for k in 0..n {
        let mut best = k;
        let mut best_mag = m[(k, k)].abs();
        for i in (k + 1)..n {
            let mag = m[(i, k)].abs();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag == F::zero() {
            return F::zero();
        }
        if best != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(best, j)];
                m[(best, j)] = tmp;
            }
            det = -det;
        }
        let pivot = m[(k, k)];
        det = det * pivot;
        for i in (k + 1)..n {
            let factor = m[(i, k)] / pivot;
            for j in (k + 1)..n {
                m[(i, j)] = m[(i, j)] - factor * m[(k, j)];
            }
        }
    }
    det
}

/// Infinity norm of a vector.
pub fn inf_norm<F: Scalar>(x: &[F]) -> F {
    x.iter().fold(F::zero(), |acc, v| acc.max(v.abs()))
}

/// Dot product.
pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Euclidean norm.
pub fn norm2<F: Scalar>(x: &[F]) -> F {
    dot(x, x).sqrt()
}
