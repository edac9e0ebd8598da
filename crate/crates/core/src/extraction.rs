//! Recovering `(μ₁, μ₂)` from a moment table of a cyclic pair.
//!
//! Only `ν̂(0..d)` is visible in a degree-`d` table, so the result is the
//! Fourier data of a representative of the moment class rather than a
//! unique measure. Cyclicity of the pair cannot be checked from finite data;
//! reports record it as an assumption.

use nalgebra::{Complex, DMatrix};

use crate::dirichlet1d::Gram1D;
use crate::dirichlet2d::Gram2D;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_defect, hermitian_min_eigenvalue, max_abs};
use crate::measures::FourierTable;
use crate::scalar::{creal, czero, from_usize, lit, to_f64, Real};

/// Cross-`m` disagreement above which moment data is rejected.
pub const CONSISTENCY_LIMIT: f64 = 1e-6;
/// Splitting residual above which [`model_roundtrip`] refuses a table.
pub const SPLITTING_LIMIT: f64 = 1e-8;
/// Relative tolerance for the Toeplitz positivity certificate.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// `M[(m,n),(p,q)] = ⟨T₁^m T₂^n x₀, T₁^p T₂^q x₀⟩` for `m,p ≤ d1`, `n,q ≤ d2`,
/// in basis order `m·(d2+1) + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T: Real = f64> {
    d1: usize,
    d2: usize,
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real> MomentTable<T> {
    /// Checks shape, Hermitian symmetry and `M[(0,0),(0,0)] = 1`.
    pub fn new(d1: usize, d2: usize, matrix: DMatrix<Complex<T>>) -> Result<Self> {
        let n = (d1 + 1) * (d2 + 1);
        if matrix.shape() != (n, n) {
            return Err(Error::Domain(format!(
                "moment table for degrees ({d1},{d2}) must be {n}×{n}, got {:?}",
                matrix.shape()
            )));
        }
        let scale = max_abs(&matrix).max(T::one());
        let defect = hermitian_defect(&matrix);
        if defect > lit::<T>(1e-10) * scale {
            return Err(Error::Domain(format!("moment table is not Hermitian (defect {:e})", to_f64(defect))));
        }
        if (matrix[(0, 0)] - creal(T::one())).norm_sqr().sqrt() > lit(1e-12) {
            return Err(Error::Domain("moment table needs a unit cyclic vector: M[0][0] = 1".into()));
        }
        Ok(Self { d1, d2, matrix })
    }

    /// Table of the shifts on `D²(μ)` with cyclic vector `1`.
    pub fn from_gram(g: &Gram2D<T>) -> Self {
        let (d1, d2) = g.degrees();
        Self { d1, d2, matrix: g.dense() }
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn get(&self, (m, n): (usize, usize), (p, q): (usize, usize)) -> Complex<T> {
        let w = self.d2 + 1;
        self.matrix[(m * w + n, p * w + q)]
    }

    pub fn set(&mut self, (m, n): (usize, usize), (p, q): (usize, usize), v: Complex<T>) {
        let w = self.d2 + 1;
        self.matrix[(m * w + n, p * w + q)] = v;
    }

    /// One-variable table `M[(m,0),(p,0)]`.
    pub fn first_variable(&self) -> DMatrix<Complex<T>> {
        DMatrix::from_fn(self.d1 + 1, self.d1 + 1, |m, p| self.get((m, 0), (p, 0)))
    }

    /// One-variable table `M[(0,n),(0,q)]`.
    pub fn second_variable(&self) -> DMatrix<Complex<T>> {
        DMatrix::from_fn(self.d2 + 1, self.d2 + 1, |n, q| self.get((0, n), (0, q)))
    }
}

/// Max residual of the splitting identities: the full product
/// `M[(m,n),(p,q)] = M[(m,0),(p,0)]·M[(0,n),(0,q)]`, which contains both
/// displayed special cases `(p,q) = (1,1)` and `(m,n),(p,q) = (m,1),(1,n)`.
pub fn verify_splitting<T: Real>(table: &MomentTable<T>) -> T {
    let mut worst = T::zero();
    for m in 0..=table.d1 {
        for n in 0..=table.d2 {
            for p in 0..=table.d1 {
                for q in 0..=table.d2 {
                    let want = table.get((m, 0), (p, 0)) * table.get((0, n), (0, q));
                    let r = table.get((m, n), (p, q)) - want;
                    worst = worst.max(r.norm_sqr().sqrt());
                }
            }
        }
    }
    worst
}

/// Fourier data recovered from a one-variable table.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction1D<T: Real = f64> {
    /// `ν̂(0..d)` (indices `k = 0..=d-1`).
    pub coeffs: Vec<Complex<T>>,
    /// Largest disagreement between the `m = 1` extractor and the witnesses
    /// from `m ≥ 2`, and of row 0 from `δ_{0p}`.
    pub consistency: T,
}

impl<T: Real> Extraction1D<T> {
    pub fn table(&self) -> FourierTable<T> {
        FourierTable::new(self.coeffs.clone())
    }
}

/// Inverts `g(m,p) = δ_{mp} + (m∧p) ν̂(p-m)/2π` for `ν̂(0..d)`.
///
/// `ν̂(k) = 2π g(1, 1+k)` for `k ≥ 1` and `ν̂(0) = 2π (g(1,1) - 1)`; the same
/// quantities from `m ≥ 2` are consistency witnesses.
pub fn extract_measure_1d<T: Real>(g: &DMatrix<Complex<T>>) -> Result<Extraction1D<T>> {
    let size = g.nrows();
    if g.ncols() != size || size < 3 {
        return Err(Error::Domain("one-variable table must be square with degree ≥ 2".into()));
    }
    let d = size - 1;
    let scale = max_abs(g).max(T::one());
    if hermitian_defect(g) > lit::<T>(1e-10) * scale {
        return Err(Error::Domain("one-variable table is not Hermitian".into()));
    }
    let two_pi = T::two_pi();
    let one = creal::<T>(T::one());
    let mut coeffs = Vec::with_capacity(d);
    coeffs.push((g[(1, 1)] - one) * two_pi);
    for k in 1..d {
        coeffs.push(g[(1, 1 + k)] * two_pi);
    }
    let mut consistency = (g[(0, 0)] - one).norm_sqr().sqrt();
    for p in 1..=d {
        consistency = consistency.max(g[(0, p)].norm_sqr().sqrt() * two_pi);
    }
    for m in 2..=d {
        let w = (g[(m, m)] - one) * two_pi / from_usize::<T>(m);
        consistency = consistency.max((w - coeffs[0]).norm_sqr().sqrt());
    }
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        for m in 2..=d - k {
            let w = g[(m, m + k)] * two_pi / from_usize::<T>(m);
            consistency = consistency.max((w - c).norm_sqr().sqrt());
        }
    }
    if consistency > lit(CONSISTENCY_LIMIT) {
        return Err(Error::InconsistentMoments(format!(
            "cross-degree disagreement {:e} exceeds {CONSISTENCY_LIMIT:e}",
            to_f64(consistency)
        )));
    }
    Ok(Extraction1D { coeffs, consistency })
}

/// Smallest eigenvalue of the Toeplitz matrix `(ν̂(k - j))_{j,k}` built from
/// `ν̂(0..K)`; non-negative for the Fourier data of a positive measure.
pub fn toeplitz_min_eigenvalue<T: Real>(coeffs: &[Complex<T>]) -> T {
    let n = coeffs.len();
    if n == 0 {
        return T::zero();
    }
    let t = DMatrix::from_fn(n, n, |j, k| if k >= j { coeffs[k - j] } else { coeffs[j - k].conj() });
    hermitian_min_eigenvalue(&t)
}

/// Result of [`model_roundtrip`].
#[derive(Clone, Debug, PartialEq)]
pub struct RoundtripReport<T: Real = f64> {
    pub nu1: Extraction1D<T>,
    pub nu2: Extraction1D<T>,
    pub splitting_residual: T,
    /// Max entrywise deviation of the rebuilt Gram matrix from the table.
    pub roundtrip_dev: T,
    /// Smallest Toeplitz eigenvalues of the extracted data.
    pub toeplitz_min: (T, T),
}

fn check_positive<T: Real>(which: &str, coeffs: &[Complex<T>]) -> Result<T> {
    let lam = toeplitz_min_eigenvalue(coeffs);
    let scale = coeffs.first().map(|c| c.re.abs()).unwrap_or(T::zero()).max(T::one());
    if lam < -lit::<T>(POSITIVITY_TOL) * scale {
        return Err(Error::NotPositive(format!(
            "{which}: Toeplitz matrix of the extracted coefficients has eigenvalue {:e}",
            to_f64(lam)
        )));
    }
    Ok(lam)
}

fn rebuild<T: Real>(coeffs: &[Complex<T>]) -> Result<Gram1D<T>> {
    let mut c = coeffs.to_vec();
    // ν̂(d) only meets the zero row of the Gram matrix.
    c.push(czero());
    Gram1D::from_coeffs(c)
}

/// Splits the table, extracts both measures, rebuilds the `D²(μ)` Gram
/// matrix and reports its deviation from the table.
pub fn model_roundtrip<T: Real>(table: &MomentTable<T>) -> Result<RoundtripReport<T>> {
    let splitting_residual = verify_splitting(table);
    if !(splitting_residual <= lit(SPLITTING_LIMIT)) {
        return Err(Error::SplittingViolated(to_f64(splitting_residual)));
    }
    let nu1 = extract_measure_1d(&table.first_variable())?;
    let nu2 = extract_measure_1d(&table.second_variable())?;
    let l1 = check_positive("first measure", &nu1.coeffs)?;
    let l2 = check_positive("second measure", &nu2.coeffs)?;
    let gram = Gram2D::from_factors(rebuild(&nu1.coeffs)?, rebuild(&nu2.coeffs)?)?;
    let roundtrip_dev = max_abs(&(gram.dense() - table.matrix()));
    Ok(RoundtripReport { nu1, nu2, splitting_residual, roundtrip_dev, toeplitz_min: (l1, l2) })
}
