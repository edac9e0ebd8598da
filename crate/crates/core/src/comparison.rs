//! The two-integral Dirichlet-type space `D(μ₁, μ₂)` of Chavan et al.,
//! whose norm keeps only the two slice semi-norms, and the contrast with
//! `D²(μ)`: its shifts form a left-inverse commuting toral 2-isometry that is
//! not doubly commuting.

use nalgebra::{Complex, DMatrix};

use crate::error::Result;
use crate::linalg::{max_abs, GuardedCholesky};
use crate::measures::{FourierMeasure, ProductMeasure};
use crate::operators::{
    gram_adjoint, left_inverse_commuting_residual, mz, shift_commutator, two_isometry_form_residual,
    GramSpace,
};
use crate::scalar::{creal, from_usize, Real};

/// `D(μ₁, μ₂)` as a [`GramSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChavanSpace<T: Real = f64> {
    pub mu1: FourierMeasure<T>,
    pub mu2: FourierMeasure<T>,
}

impl<T: Real> ChavanSpace<T> {
    pub fn new(mu1: FourierMeasure<T>, mu2: FourierMeasure<T>) -> Self {
        Self { mu1, mu2 }
    }

    /// Lebesgue × Lebesgue: squared norm `Σ (m+n+1)|a_{m,n}|²`.
    pub fn classical() -> Self {
        Self::new(FourierMeasure::classical(), FourierMeasure::classical())
    }

    pub fn hardy() -> Self {
        Self::new(FourierMeasure::zero(), FourierMeasure::zero())
    }

    pub fn from_product(mu: &ProductMeasure<T>) -> Self {
        Self::new(mu.mu1.clone(), mu.mu2.clone())
    }

    /// `⟨z₁^m z₂^n, z₁^p z₂^q⟩ = δδ + (1/2π)[δ_{nq}(m∧p)μ̂₁(p-m) + δ_{mp}(n∧q)μ̂₂(q-n)]`.
    pub fn entry(&self, (m, n): (usize, usize), (p, q): (usize, usize)) -> Complex<T> {
        let two_pi = T::two_pi();
        let mut e = Complex::new(T::zero(), T::zero());
        if n == q {
            e += self.mu1.fourier_coeff(p as i64 - m as i64) * from_usize::<T>(m.min(p)) / two_pi;
        }
        if m == p {
            e += self.mu2.fourier_coeff(q as i64 - n as i64) * from_usize::<T>(n.min(q)) / two_pi;
        }
        if m == p && n == q {
            e += creal(T::one());
        }
        e
    }
}

/// Monomial Gram matrix of `D(μ₁, μ₂)` on `P_{d1,d2}`.
#[derive(Clone, Debug)]
pub struct GramChavan<T: Real = f64> {
    degrees: (usize, usize),
    matrix: DMatrix<Complex<T>>,
    condition: T,
}

impl<T: Real> GramChavan<T> {
    pub fn degrees(&self) -> (usize, usize) {
        self.degrees
    }

    /// `G[(m,n)][(p,q)]` in basis order `m·(d2+1) + n`.
    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn entry(&self, (m, n): (usize, usize), (p, q): (usize, usize)) -> Complex<T> {
        let w = self.degrees.1 + 1;
        self.matrix[(m * w + n, p * w + q)]
    }

    pub fn condition(&self) -> T {
        self.condition
    }
}

pub fn gram_chavan<T: Real>(
    mu1: &FourierMeasure<T>,
    mu2: &FourierMeasure<T>,
    d1: usize,
    d2: usize,
) -> Result<GramChavan<T>> {
    let space = ChavanSpace::new(mu1.clone(), mu2.clone());
    let w = d2 + 1;
    let n = (d1 + 1) * w;
    let matrix = DMatrix::from_fn(n, n, |i, j| space.entry((i / w, i % w), (j / w, j % w)));
    let chol = GuardedCholesky::new(&matrix.transpose(), "Chavan Gram")?;
    Ok(GramChavan { degrees: (d1, d2), matrix, condition: chol.condition() })
}

impl<T: Real> GramSpace<T> for ChavanSpace<T> {
    fn inner_matrix(&self, d1: usize, d2: usize) -> Result<DMatrix<Complex<T>>> {
        Ok(gram_chavan(&self.mu1, &self.mu2, d1, d2)?.matrix.transpose())
    }
}

/// Outcome of [`chavan_adjoint_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChavanAdjointReport<T: Real = f64> {
    /// Max deviation of `M_{z₁}^*` from `(p+q+1)/(p+q) z₁^{p-1} z₂^q`.
    pub adjoint_residual: T,
    /// `|⟨(M_{z₂}M_{z₁}^* - M_{z₁}^*M_{z₂}) z₁z₂, z₂²⟩|` coefficient, i.e. `|3/2 - 4/3|`.
    pub commutator_at_11: T,
    /// Max entry of the commutator over `P_{d,d}`.
    pub commutator_max: T,
}

/// Checks the closed form of `M_{z₁}^*` on the classical `D(μ₁, μ₂)` and
/// measures the failure of `M_{z₁}^* M_{z₂} = M_{z₂} M_{z₁}^*`. Needs `d ≥ 2`.
pub fn chavan_adjoint_check<T: Real>(space: &ChavanSpace<T>, d: usize) -> Result<ChavanAdjointReport<T>> {
    assert!(d >= 2, "the (1,1) witness needs degree at least 2");
    let adj = gram_adjoint(&mz::<T>(1, d - 1, d), space)?;
    let w = d + 1;
    let expected = DMatrix::from_fn(d * w, w * w, |i, j| {
        let (m, n) = (i / w, i % w);
        let (p, q) = (j / w, j % w);
        if p >= 1 && m == p - 1 && n == q {
            creal(from_usize::<T>(p + q + 1) / from_usize::<T>(p + q))
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    let adjoint_residual = max_abs(&(adj.matrix() - expected));
    let comm = shift_commutator(space, d)?;
    // column (1,1) of P_{d,d}, row (0,2) of P_{d-1,d+1}
    let commutator_at_11 = comm.matrix()[(2, w + 1)].norm_sqr().sqrt();
    Ok(ChavanAdjointReport { adjoint_residual, commutator_at_11, commutator_max: max_abs(comm.matrix()) })
}

/// Outcome of [`chavan_lic_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChavanLicReport<T: Real = f64> {
    /// Max entry of `L₁M_{z₂} - M_{z₂}L₁` (and the symmetric pair).
    pub lic_residual: T,
    /// Max entry of the 2-isometry defect form over both variables.
    pub two_isometry_residual: T,
}

pub fn chavan_lic_check<T: Real>(space: &ChavanSpace<T>, d1: usize, d2: usize) -> Result<ChavanLicReport<T>> {
    let lic_residual = left_inverse_commuting_residual::<T>(d1, d2);
    let two_isometry_residual = two_isometry_form_residual(space, 1, d1, d2)?
        .max(two_isometry_form_residual(space, 2, d1, d2)?);
    Ok(ChavanLicReport { lic_residual, two_isometry_residual })
}
