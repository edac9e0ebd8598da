//! Dense Hermitian helpers: guarded Cholesky, condition numbers, rank and
//! orthogonal complements with respect to a Gram inner product.

use nalgebra::{Cholesky, Complex, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::scalar::{czero, lit, to_f64, Real};

/// Condition-number ceiling above which Gram factorisations are refused.
pub const COND_LIMIT: f64 = 1e12;

/// Spectral condition number of a Hermitian positive matrix.
///
/// Returns `+inf` when the smallest eigenvalue is not positive.
pub fn hermitian_condition<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    if m.nrows() == 0 {
        return T::one();
    }
    let eig = m.clone().symmetric_eigenvalues();
    let mut lo = eig[0];
    let mut hi = eig[0];
    for &v in eig.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo <= T::zero() {
        return lit(f64::INFINITY);
    }
    hi / lo
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eigenvalue<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let eig = m.clone().symmetric_eigenvalues();
    eig.iter().copied().fold(lit(f64::INFINITY), |a, b| a.min(b))
}

/// Max-abs deviation from Hermitian symmetry.
pub fn hermitian_defect<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = m[(i, j)] - m[(j, i)].conj();
            worst = worst.max(d.norm_sqr().sqrt());
        }
    }
    worst
}

/// Max-abs entry of a complex matrix.
pub fn max_abs<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
}

/// Cholesky factor of a Hermitian positive-definite matrix, guarded by a
/// condition-number check.
#[derive(Clone, Debug)]
pub struct GuardedCholesky<T: Real> {
    chol: Cholesky<Complex<T>, Dyn>,
    condition: T,
}

impl<T: Real> GuardedCholesky<T> {
    pub fn new(m: &DMatrix<Complex<T>>, what: &str) -> Result<Self> {
        let condition = hermitian_condition(m);
        if !(condition <= lit(COND_LIMIT)) {
            return Err(Error::IllConditioned(format!(
                "{what}: condition number {:.3e} exceeds {COND_LIMIT:e}",
                to_f64(condition)
            )));
        }
        let chol = Cholesky::new(m.clone()).ok_or_else(|| {
            Error::IllConditioned(format!("{what}: Cholesky factorisation failed"))
        })?;
        Ok(Self { chol, condition })
    }

    pub fn condition(&self) -> T {
        self.condition
    }

    /// Lower-triangular factor `L` with `m = L L^H`.
    pub fn l(&self) -> DMatrix<Complex<T>> {
        self.chol.l()
    }

    pub fn solve(&self, rhs: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        self.chol.solve(rhs)
    }

    pub fn solve_vec(&self, rhs: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        self.chol.solve(rhs)
    }

    pub fn inverse(&self) -> DMatrix<Complex<T>> {
        self.chol.inverse()
    }
}

/// Numerical rank of `m`: singular values above `rel_tol * sigma_max`.
pub fn numerical_rank<T: Real>(m: &DMatrix<Complex<T>>, rel_tol: T) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().copied().fold(T::zero(), |a, b| a.max(b));
    if smax == T::zero() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Orthonormal basis (Euclidean) of the orthogonal complement of the column
/// space of `b` in `C^n`, where `n = b.nrows()`.
///
/// Columns of `b` are treated as spanning vectors; directions with singular
/// value at most `rel_tol * sigma_max` are reported as complement.
pub fn complement_of_range<T: Real>(b: &DMatrix<Complex<T>>, rel_tol: T) -> DMatrix<Complex<T>> {
    let n = b.nrows();
    if b.ncols() == 0 {
        return DMatrix::identity(n, n);
    }
    // Pad to a square matrix so the SVD returns a full set of left vectors.
    let width = n.max(b.ncols());
    let mut padded = DMatrix::from_element(n, width, czero());
    padded.columns_mut(0, b.ncols()).copy_from(b);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd
        .singular_values
        .iter()
        .copied()
        .fold(T::zero(), |a, b| a.max(b));
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| k < u.ncols() && svd.singular_values[k] <= rel_tol * smax)
        .collect();
    let mut out = DMatrix::from_element(n, keep.len(), czero());
    for (c, &k) in keep.iter().enumerate() {
        out.set_column(c, &u.column(k));
    }
    out
}

/// Orthonormal basis of the complement of `span(b)` with respect to the inner
/// product `<x, y> = y^H h x`, `h` Hermitian positive definite.
pub fn gram_complement<T: Real>(
    h: &GuardedCholesky<T>,
    b: &DMatrix<Complex<T>>,
    rel_tol: T,
) -> DMatrix<Complex<T>> {
    let l = h.l();
    let lh = l.adjoint();
    let tilde = &lh * b;
    let perp = complement_of_range(&tilde, rel_tol);
    // x = L^{-H} u
    let mut out = perp.clone();
    if perp.ncols() > 0 {
        let ok = lh.solve_upper_triangular_mut(&mut out);
        debug_assert!(ok);
    }
    out
}
