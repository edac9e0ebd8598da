//! One-variable Dirichlet-type spaces `D(ν)`: monomial Gram matrix, the
//! matrix `M_ν` and the Shimorin structure condition.

use nalgebra::{Complex, DMatrix};

use crate::error::Result;
use crate::linalg::GuardedCholesky;
use crate::measures::{FourierData, FourierMeasure};
use crate::scalar::{creal, czero, from_usize, Real};

/// `M_ν(j, k) = (j ∧ k) ν̂(k - j)` for `0 ≤ j, k < size`.
pub fn mnu_matrix<T: Real, D: FourierData<T> + ?Sized>(nu: &D, size: usize) -> DMatrix<Complex<T>> {
    let coeffs: Vec<Complex<T>> = (0..size as i64).map(|k| nu.fourier_coeff(k)).collect();
    mnu_from_coeffs(&coeffs, size)
}

/// Same as [`mnu_matrix`] from a table `ν̂(0..size)`.
pub(crate) fn mnu_from_coeffs<T: Real>(coeffs: &[Complex<T>], size: usize) -> DMatrix<Complex<T>> {
    DMatrix::from_fn(size, size, |j, k| {
        let c = if k >= j { coeffs[k - j] } else { coeffs[j - k].conj() };
        c * from_usize::<T>(j.min(k))
    })
}

/// Max over valid `(j, k)` of `|M(j+2,k+2) - 2M(j+1,k+1) + M(j,k)|`.
pub fn shimorin_residual<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    if n < 3 {
        return worst;
    }
    let two: T = T::one() + T::one();
    for j in 0..n - 2 {
        for k in 0..n - 2 {
            let r = m[(j + 2, k + 2)] - m[(j + 1, k + 1)] * two + m[(j, k)];
            worst = worst.max(r.norm_sqr().sqrt());
        }
    }
    worst
}

/// Monomial Gram matrix of `D(ν)` truncated to degree `d`.
///
/// `matrix()[(m, p)] = ⟨z^m, z^p⟩ = δ_{mp} + (m ∧ p) ν̂(p - m) / 2π`, so that
/// `‖Σ a_m z^m‖² = Σ a_m conj(a_p) G[m][p]`.
#[derive(Clone, Debug)]
pub struct Gram1D<T: Real = f64> {
    degree: usize,
    coeffs: Vec<Complex<T>>,
    matrix: DMatrix<Complex<T>>,
    chol: GuardedCholesky<T>,
}

/// Gram matrix of `D(ν)` for a measure.
pub fn gram_1d<T: Real>(nu: &FourierMeasure<T>, d: usize) -> Result<Gram1D<T>> {
    Gram1D::from_data(nu, d)
}

impl<T: Real> Gram1D<T> {
    /// Builds the Gram matrix from any source of Fourier coefficients.
    pub fn from_data<D: FourierData<T> + ?Sized>(nu: &D, d: usize) -> Result<Self> {
        let coeffs = (0..=d as i64).map(|k| nu.fourier_coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    /// Builds the Gram matrix from `ν̂(0..=d)`.
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Result<Self> {
        assert!(!coeffs.is_empty(), "need at least nu_hat(0)");
        let degree = coeffs.len() - 1;
        let size = degree + 1;
        let scale = T::one() / T::two_pi();
        let mut matrix = mnu_from_coeffs(&coeffs, size) * creal(scale);
        for m in 0..size {
            matrix[(m, m)] += creal(T::one());
            // keep the diagonal exactly real
            matrix[(m, m)].im = T::zero();
        }
        let chol = GuardedCholesky::new(&matrix.transpose(), "one-variable Gram")?;
        Ok(Self { degree, coeffs, matrix, chol })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `ν̂(0..=d)` used to build the matrix.
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `ν̂(k)` for `|k| ≤ d`.
    pub fn coeff(&self, k: i64) -> Complex<T> {
        let c = self.coeffs[k.unsigned_abs() as usize];
        if k >= 0 {
            c
        } else {
            c.conj()
        }
    }

    /// `G[m][p] = ⟨z^m, z^p⟩`.
    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    /// Matrix `H = Gᵀ` of the inner product in the form `⟨x, y⟩ = y^H H x`.
    pub fn inner_matrix(&self) -> DMatrix<Complex<T>> {
        self.matrix.transpose()
    }

    /// Cholesky factor of [`Self::inner_matrix`].
    pub fn cholesky(&self) -> &GuardedCholesky<T> {
        &self.chol
    }

    pub fn condition(&self) -> T {
        self.chol.condition()
    }

    /// `⟨Σ a_m z^m, Σ b_p z^p⟩` for coefficient slices of length `d + 1`.
    pub fn inner(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
        let mut acc = czero();
        for (m, &am) in a.iter().enumerate() {
            for (p, &bp) in b.iter().enumerate() {
                acc += am * bp.conj() * self.matrix[(m, p)];
            }
        }
        acc
    }

    /// `M_ν` on indices `0..=d`, rebuilt from the stored coefficients.
    pub fn mnu(&self) -> DMatrix<Complex<T>> {
        mnu_from_coeffs(&self.coeffs, self.degree + 1)
    }
}
