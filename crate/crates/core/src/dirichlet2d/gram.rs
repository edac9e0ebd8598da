use nalgebra::{Complex, DMatrix};

use crate::dirichlet1d::Gram1D;
use crate::error::{Error, Result};
use crate::linalg::COND_LIMIT;
use crate::measures::ProductMeasure;
use crate::scalar::{creal, czero, from_usize, lit, to_f64, Real};

use super::bipoly::BiPoly;

/// Monomial Gram matrix of `D²(μ)` on `P_{d1,d2}`, stored through its two
/// one-variable factors.
///
/// Entry `((m,n),(p,q))` is `⟨z₁^m z₂^n, z₁^p z₂^q⟩_μ`; the basis index of
/// `(m, n)` is `m·(d2+1) + n`. The dense matrix is only materialised on
/// request.
#[derive(Clone, Debug)]
pub struct Gram2D<T: Real = f64> {
    g1: Gram1D<T>,
    g2: Gram1D<T>,
}

/// Gram matrix of `D²(μ)` truncated to bidegree `(d1, d2)`.
pub fn gram_2d<T: Real>(mu: &ProductMeasure<T>, d1: usize, d2: usize) -> Result<Gram2D<T>> {
    Gram2D::from_factors(Gram1D::from_data(&mu.mu1, d1)?, Gram1D::from_data(&mu.mu2, d2)?)
}

impl<T: Real> Gram2D<T> {
    pub fn from_factors(g1: Gram1D<T>, g2: Gram1D<T>) -> Result<Self> {
        let cond = g1.condition() * g2.condition();
        if !(cond <= lit(COND_LIMIT)) {
            return Err(Error::IllConditioned(format!(
                "two-variable Gram: condition number {:.3e} exceeds {COND_LIMIT:e}",
                to_f64(cond)
            )));
        }
        Ok(Self { g1, g2 })
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.g1.degree(), self.g2.degree())
    }

    pub fn dim(&self) -> usize {
        (self.g1.degree() + 1) * (self.g2.degree() + 1)
    }

    pub fn factor1(&self) -> &Gram1D<T> {
        &self.g1
    }

    pub fn factor2(&self) -> &Gram1D<T> {
        &self.g2
    }

    /// Spectral condition number, `cond(G₁)·cond(G₂)`.
    pub fn condition(&self) -> T {
        self.g1.condition() * self.g2.condition()
    }

    pub fn index(&self, m: usize, n: usize) -> usize {
        m * (self.g2.degree() + 1) + n
    }

    /// `⟨z₁^m z₂^n, z₁^p z₂^q⟩_μ` from the Hardy part and the three
    /// semi-inner products.
    pub fn entry(&self, (m, n): (usize, usize), (p, q): (usize, usize)) -> Complex<T> {
        let two_pi = T::two_pi();
        let w1 = from_usize::<T>(m.min(p));
        let w2 = from_usize::<T>(n.min(q));
        let a = self.g1.coeff(p as i64 - m as i64) * w1;
        let b = self.g2.coeff(q as i64 - n as i64) * w2;
        let mut e = a * b / (two_pi * two_pi);
        if n == q {
            e += a / two_pi;
        }
        if m == p {
            e += b / two_pi;
        }
        if m == p && n == q {
            e += creal(T::one());
        }
        e
    }

    /// Dense Gram matrix assembled entry by entry.
    pub fn dense(&self) -> DMatrix<Complex<T>> {
        let (_, d2) = self.degrees();
        let w = d2 + 1;
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.entry((i / w, i % w), (j / w, j % w)))
    }

    /// `G₁ ⊗ G₂`.
    pub fn kronecker(&self) -> DMatrix<Complex<T>> {
        self.g1.matrix().kronecker(self.g2.matrix())
    }

    /// Dense matrix `H = Gᵀ` for which `⟨x, y⟩ = y^H H x`.
    pub fn inner_matrix(&self) -> DMatrix<Complex<T>> {
        self.g1.inner_matrix().kronecker(&self.g2.inner_matrix())
    }

    /// `⟨f, g⟩_μ`. Both polynomials must fit in the Gram's degrees.
    pub fn inner(&self, f: &BiPoly<T>, g: &BiPoly<T>) -> Result<Complex<T>> {
        let (d1, d2) = self.degrees();
        let a = f.resized(d1, d2)?;
        let b = g.resized(d1, d2)?;
        // Σ_{m,p} G₁[m][p] (A G₂ Bᴴ)[m][p]
        let inner = a.matrix() * self.g2.matrix() * b.matrix().adjoint();
        Ok(self.g1.matrix().component_mul(&inner).iter().fold(czero(), |s, z| s + *z))
    }

    pub fn norm_sq(&self, f: &BiPoly<T>) -> Result<T> {
        Ok(self.inner(f, f)?.re)
    }

    /// Solves `H x = y` with `y` given as a coefficient grid, using
    /// `X = H₁⁻¹ Y H₂⁻ᵀ`.
    pub fn solve_grid(&self, y: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        let left = self.g1.cholesky().solve(y);
        self.g2.cholesky().solve(&left.transpose()).transpose()
    }

    /// Coefficients of the reproducing kernel `K_w` in the truncated space.
    pub fn kernel_vector(&self, w1: Complex<T>, w2: Complex<T>) -> BiPoly<T> {
        let (d1, d2) = self.degrees();
        let rhs = DMatrix::from_fn(d1 + 1, d2 + 1, |m, n| {
            (w1.powu(m as u32) * w2.powu(n as u32)).conj()
        });
        BiPoly::from_matrix(self.solve_grid(&rhs))
    }

    /// `K(z, w) = Σ z^α (G⁻¹)_{βα} conj(w)^β`.
    pub fn kernel(&self, z: (Complex<T>, Complex<T>), w: (Complex<T>, Complex<T>)) -> Complex<T> {
        self.kernel_vector(w.0, w.1).eval(z.0, z.1)
    }
}

/// `‖f‖²_μ` from the Gram matrix at `f`'s own degrees.
pub fn norm_sq<T: Real>(mu: &ProductMeasure<T>, f: &BiPoly<T>) -> Result<T> {
    let (d1, d2) = f.degrees();
    gram_2d(mu, d1, d2)?.norm_sq(f)
}

/// Truncated reproducing kernel of `D²(μ)` on `P_{d1,d2}`.
pub fn kernel_eval<T: Real>(
    mu: &ProductMeasure<T>,
    d1: usize,
    d2: usize,
    z: (Complex<T>, Complex<T>),
    w: (Complex<T>, Complex<T>),
) -> Result<Complex<T>> {
    for p in [z.0, z.1, w.0, w.1] {
        if !(p.norm_sqr() < T::one()) {
            return Err(Error::Domain("kernel points must lie in the open bidisc".into()));
        }
    }
    Ok(gram_2d(mu, d1, d2)?.kernel(z, w))
}
