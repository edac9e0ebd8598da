use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, from_usize, to_f64, Real};

/// Which variable a slice sets to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slice {
    /// Keep `f(0, z₂)`.
    Z1Zero,
    /// Keep `f(z₁, 0)`.
    Z2Zero,
}

/// Polynomial `Σ a_{m,n} z₁^m z₂^n` on the dense grid `0 ≤ m ≤ d1`, `0 ≤ n ≤ d2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<T: Real = f64> {
    coeffs: DMatrix<Complex<T>>,
}

impl<T: Real> BiPoly<T> {
    pub fn zeros(d1: usize, d2: usize) -> Self {
        Self { coeffs: DMatrix::from_element(d1 + 1, d2 + 1, czero()) }
    }

    /// `coeffs[(m, n)] = a_{m,n}`.
    pub fn from_matrix(coeffs: DMatrix<Complex<T>>) -> Self {
        assert!(coeffs.nrows() > 0 && coeffs.ncols() > 0, "empty coefficient grid");
        Self { coeffs }
    }

    /// Builds a polynomial from `(m, n, a_{m,n})` triples; degrees are the
    /// largest indices seen unless larger ones are requested.
    pub fn from_terms(terms: &[(usize, usize, Complex<T>)], d1: usize, d2: usize) -> Self {
        let d1 = terms.iter().map(|t| t.0).max().unwrap_or(0).max(d1);
        let d2 = terms.iter().map(|t| t.1).max().unwrap_or(0).max(d2);
        let mut p = Self::zeros(d1, d2);
        for &(m, n, a) in terms {
            p.coeffs[(m, n)] += a;
        }
        p
    }

    pub fn monomial(m: usize, n: usize) -> Self {
        let mut p = Self::zeros(m, n);
        p.coeffs[(m, n)] = cone();
        p
    }

    pub fn constant(c: Complex<T>) -> Self {
        let mut p = Self::zeros(0, 0);
        p.coeffs[(0, 0)] = c;
        p
    }

    /// Grid bounds `(d1, d2)`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.coeffs.nrows() - 1, self.coeffs.ncols() - 1)
    }

    pub fn coeff(&self, m: usize, n: usize) -> Complex<T> {
        if m < self.coeffs.nrows() && n < self.coeffs.ncols() {
            self.coeffs[(m, n)]
        } else {
            czero()
        }
    }

    pub fn set(&mut self, m: usize, n: usize, a: Complex<T>) {
        self.coeffs[(m, n)] = a;
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.coeffs
    }

    /// Coefficients in basis order `m·(d2+1) + n`.
    pub fn to_vector(&self) -> DVector<Complex<T>> {
        let (d1, d2) = self.degrees();
        DVector::from_fn((d1 + 1) * (d2 + 1), |i, _| self.coeffs[(i / (d2 + 1), i % (d2 + 1))])
    }

    pub fn from_vector(v: &DVector<Complex<T>>, d1: usize, d2: usize) -> Self {
        assert_eq!(v.len(), (d1 + 1) * (d2 + 1), "vector length does not match degrees");
        Self { coeffs: DMatrix::from_fn(d1 + 1, d2 + 1, |m, n| v[m * (d2 + 1) + n]) }
    }

    /// Same polynomial on a grid of different size. Shrinking fails if a
    /// nonzero coefficient would be dropped.
    pub fn resized(&self, d1: usize, d2: usize) -> Result<Self> {
        let (e1, e2) = self.degrees();
        for m in 0..=e1 {
            for n in 0..=e2 {
                if (m > d1 || n > d2) && self.coeffs[(m, n)] != czero() {
                    return Err(Error::Domain(format!(
                        "coefficient ({m},{n}) does not fit in degrees ({d1},{d2})"
                    )));
                }
            }
        }
        Ok(Self { coeffs: DMatrix::from_fn(d1 + 1, d2 + 1, |m, n| self.coeff(m, n)) })
    }

    /// Smallest grid holding every nonzero coefficient.
    pub fn trimmed(&self) -> Self {
        let (e1, e2) = self.degrees();
        let mut d1 = 0;
        let mut d2 = 0;
        for m in 0..=e1 {
            for n in 0..=e2 {
                if self.coeffs[(m, n)] != czero() {
                    d1 = d1.max(m);
                    d2 = d2.max(n);
                }
            }
        }
        self.resized(d1, d2).expect("trimming keeps every nonzero coefficient")
    }

    /// `T_{k1,k2} f`: zero every coefficient with `m < k1` or `n < k2`.
    pub fn tail(&self, k1: usize, k2: usize) -> Self {
        let mut out = self.clone();
        for ((m, n), a) in self.indexed() {
            if (m < k1 || n < k2) && a != czero() {
                out.coeffs[(m, n)] = czero();
            }
        }
        out
    }

    /// `f_r(z₁, z₂) = f(r z₁, r z₂)` for `0 < r < 1`.
    pub fn dilate(&self, r: T) -> Result<Self> {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::Domain(format!("dilation needs 0 < r < 1, got {}", to_f64(r))));
        }
        let mut out = self.clone();
        for ((m, n), a) in self.indexed() {
            out.coeffs[(m, n)] = a * r.powi((m + n) as i32);
        }
        Ok(out)
    }

    pub fn slice(&self, which: Slice) -> Self {
        let mut out = Self::zeros(self.degrees().0, self.degrees().1);
        for ((m, n), a) in self.indexed() {
            let keep = match which {
                Slice::Z1Zero => m == 0,
                Slice::Z2Zero => n == 0,
            };
            if keep {
                out.coeffs[(m, n)] = a;
            }
        }
        out
    }

    /// `z_i · f` on a grid enlarged by one in variable `i`.
    pub fn mul_z(&self, i: usize) -> Self {
        let (d1, d2) = self.degrees();
        let (s1, s2) = match i {
            1 => (1, 0),
            2 => (0, 1),
            _ => panic!("variable index must be 1 or 2"),
        };
        let mut out = Self::zeros(d1 + s1, d2 + s2);
        for ((m, n), a) in self.indexed() {
            out.coeffs[(m + s1, n + s2)] = a;
        }
        out
    }

    /// `f(z₁, z₂)` by Horner's rule in both variables.
    pub fn eval(&self, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
        let (d1, d2) = self.degrees();
        let mut acc = czero();
        for m in (0..=d1).rev() {
            let mut row = czero();
            for n in (0..=d2).rev() {
                row = row * z2 + self.coeffs[(m, n)];
            }
            acc = acc * z1 + row;
        }
        acc
    }

    /// Coefficient grid of `∂₁ f`, `∂₂ f` or `∂₁∂₂ f` (by `which` = 1, 2, 3).
    pub fn derivative(&self, which: usize) -> Self {
        let (d1, d2) = self.degrees();
        let (s1, s2) = match which {
            1 => (1, 0),
            2 => (0, 1),
            3 => (1, 1),
            _ => panic!("derivative selector must be 1, 2 or 3"),
        };
        let mut out = Self::zeros(d1.saturating_sub(s1), d2.saturating_sub(s2));
        for ((m, n), a) in self.indexed() {
            if m >= s1 && n >= s2 {
                let mut f = a;
                if s1 == 1 {
                    f *= from_usize::<T>(m);
                }
                if s2 == 1 {
                    f *= from_usize::<T>(n);
                }
                out.coeffs[(m - s1, n - s2)] = f;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a1, a2) = self.degrees();
        let (b1, b2) = other.degrees();
        let (d1, d2) = (a1.max(b1), a2.max(b2));
        Self { coeffs: DMatrix::from_fn(d1 + 1, d2 + 1, |m, n| self.coeff(m, n) + other.coeff(m, n)) }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { coeffs: self.coeffs.map(|a| a * s) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-cone::<T>()))
    }

    /// Sum of `|a_{m,n}|²`, the Hardy-space norm squared.
    pub fn hardy_norm_sq(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |s, a| s + a.norm_sqr())
    }

    fn indexed(&self) -> impl Iterator<Item = ((usize, usize), Complex<T>)> + '_ {
        let cols = self.coeffs.ncols();
        (0..self.coeffs.nrows())
            .flat_map(move |m| (0..cols).map(move |n| (m, n)))
            .map(move |(m, n)| ((m, n), self.coeffs[(m, n)]))
    }
}
