//! Positive measures on the circle with exactly computable Fourier data.
//!
//! A [`FourierMeasure`] is a finite sum of point masses plus a trigonometric
//! polynomial density against `dθ`. Any multiple of Lebesgue measure is
//! folded into the constant density coefficient, so `dθ` itself is the
//! density `c_0 = 1` and has total mass `2π`.

use std::fmt;

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, creal, czero, from_usize, lit, to_f64, tol, Real};

/// Number of grid angles used by the density positivity check.
pub const POSITIVITY_GRID: usize = 4096;
/// Lower bound accepted for the density on the positivity grid.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Source of Fourier coefficients `ν̂(n) = ∫ e^{-int} dν(t)`.
pub trait FourierData<T: Real> {
    fn fourier_coeff(&self, n: i64) -> Complex<T>;
}

/// A point mass on the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom<T> {
    /// Radians, canonicalised to `[0, 2π)`.
    pub angle: T,
    pub mass: T,
}

/// Atoms plus a trigonometric-polynomial density `Σ_{|k|≤K} c_k e^{ikθ} dθ`.
///
/// Only `c_0, …, c_K` are stored; `c_{-k} = conj(c_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierMeasure<T: Real = f64> {
    atoms: Vec<Atom<T>>,
    density: Vec<Complex<T>>,
}

/// First invariant a measure fails, as reported by [`FourierMeasure::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NonFiniteData,
    NegativeAtomMass { index: usize, mass: f64 },
    NonRealMeanDensity { imag: f64 },
    NegativeDensity { theta: f64, value: f64 },
    NegativeTotalMass { mass: f64 },
}

impl Violation {
    /// Short name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::NonFiniteData => "finite-data",
            Violation::NegativeAtomMass { .. } => "atom-mass-nonnegative",
            Violation::NonRealMeanDensity { .. } => "hermitian-coefficients",
            Violation::NegativeDensity { .. } => "density-nonnegative",
            Violation::NegativeTotalMass { .. } => "total-mass-nonnegative",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFiniteData => write!(f, "non-finite atom or coefficient"),
            Violation::NegativeAtomMass { index, mass } => {
                write!(f, "atom {index} has negative mass {mass}")
            }
            Violation::NonRealMeanDensity { imag } => {
                write!(f, "constant density coefficient has imaginary part {imag:e}")
            }
            Violation::NegativeDensity { theta, value } => {
                write!(f, "density is {value:e} at angle {theta}")
            }
            Violation::NegativeTotalMass { mass } => write!(f, "total mass {mass} is negative"),
        }
    }
}

fn canonical_angle<T: Real>(theta: T) -> T {
    let two_pi = T::two_pi();
    let mut a = theta % two_pi;
    if a < T::zero() {
        a += two_pi;
    }
    if a >= two_pi {
        a = T::zero();
    }
    a
}

impl<T: Real> FourierMeasure<T> {
    /// The zero measure (Hardy space case).
    pub fn zero() -> Self {
        Self { atoms: Vec::new(), density: Vec::new() }
    }

    /// Lebesgue measure with the given total mass; `lebesgue(2π)` is `dθ`.
    pub fn lebesgue(mass: T) -> Self {
        Self::from_parts(Vec::new(), Vec::new(), mass)
    }

    /// Classical normalisation `dθ` (total mass `2π`).
    pub fn classical() -> Self {
        Self::lebesgue(T::two_pi())
    }

    pub fn dirac(angle: T, mass: T) -> Self {
        Self::from_parts(vec![Atom { angle, mass }], Vec::new(), T::zero())
    }

    /// Builds a measure from raw parts without validating it.
    ///
    /// `density[k]` is `c_k` for `k ≥ 0`; `lebesgue_mass` is a total mass that
    /// is spread uniformly, i.e. added to `c_0` as `lebesgue_mass / 2π`.
    pub fn from_parts(atoms: Vec<Atom<T>>, density: Vec<Complex<T>>, lebesgue_mass: T) -> Self {
        let atoms = atoms
            .into_iter()
            .map(|a| Atom { angle: canonical_angle(a.angle), mass: a.mass })
            .collect();
        let mut density = density;
        if lebesgue_mass != T::zero() {
            if density.is_empty() {
                density.push(czero());
            }
            density[0] += creal(lebesgue_mass / T::two_pi());
        }
        while density.len() > 1 && *density.last().unwrap() == czero() {
            density.pop();
        }
        if density.len() == 1 && density[0] == czero() {
            density.clear();
        }
        Self { atoms, density }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    /// Density coefficients `c_0..=c_K`.
    pub fn density_coeffs(&self) -> &[Complex<T>] {
        &self.density
    }

    /// Bandwidth `K` of the density part (0 when there is no density).
    pub fn bandwidth(&self) -> usize {
        self.density.len().saturating_sub(1)
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    /// Density coefficient `c_k` for any integer `k`.
    pub fn density_coeff(&self, k: i64) -> Complex<T> {
        let idx = k.unsigned_abs() as usize;
        match self.density.get(idx) {
            Some(&c) if k >= 0 => c,
            Some(&c) => c.conj(),
            None => czero(),
        }
    }

    /// `ν̂(n) = Σ mass·e^{-in·angle} + 2π c_n`.
    pub fn fourier_coeff(&self, n: i64) -> Complex<T> {
        let nf: T = lit(n as f64);
        let mut acc = czero::<T>();
        for a in &self.atoms {
            acc += cis(-(nf * a.angle)) * a.mass;
        }
        acc + self.density_coeff(n) * T::two_pi()
    }

    /// `ν(𝕋) = ν̂(0)`.
    pub fn total_mass(&self) -> T {
        self.fourier_coeff(0).re
    }

    fn atom_mass(&self) -> T {
        self.atoms.iter().fold(T::zero(), |s, a| s + a.mass.abs())
    }

    /// Density `Σ c_k e^{ikθ}` at an angle (real part; the imaginary part
    /// vanishes for Hermitian coefficients).
    pub fn density_at(&self, theta: T) -> T {
        let Some(&c0) = self.density.first() else {
            return T::zero();
        };
        let two: T = lit(2.0);
        let mut v = c0.re;
        for (k, c) in self.density.iter().enumerate().skip(1) {
            v += two * (*c * cis(theta * from_usize::<T>(k))).re;
        }
        v
    }

    /// Checks every invariant; reports the first one that fails.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let finite = |x: T| to_f64(x).is_finite();
        if self.atoms.iter().any(|a| !finite(a.angle) || !finite(a.mass))
            || self.density.iter().any(|c| !finite(c.re) || !finite(c.im))
        {
            return Err(Violation::NonFiniteData);
        }
        for (index, a) in self.atoms.iter().enumerate() {
            if a.mass < T::zero() {
                return Err(Violation::NegativeAtomMass { index, mass: to_f64(a.mass) });
            }
        }
        if let Some(c0) = self.density.first() {
            let scale = c0.re.abs().max(T::one());
            if c0.im.abs() > tol::<T>(POSITIVITY_TOL) * scale {
                return Err(Violation::NonRealMeanDensity { imag: to_f64(c0.im) });
            }
        }
        if !self.density.is_empty() {
            let step = T::two_pi() / from_usize::<T>(POSITIVITY_GRID);
            let (theta, v) = (0..POSITIVITY_GRID)
                .map(|j| {
                    let theta = step * from_usize::<T>(j);
                    (theta, self.density_at(theta))
                })
                .fold((T::zero(), lit::<T>(f64::INFINITY)), |a, b| if b.1 < a.1 { b } else { a });
            if v < -tol::<T>(POSITIVITY_TOL) {
                return Err(Violation::NegativeDensity { theta: to_f64(theta), value: to_f64(v) });
            }
        }
        let mass = self.total_mass();
        if mass < T::zero() {
            return Err(Violation::NegativeTotalMass { mass: to_f64(mass) });
        }
        Ok(())
    }

    /// Validates and returns `self`, or a domain error naming the invariant.
    pub fn checked(self) -> Result<Self> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(v) => Err(Error::Domain(format!("invalid measure ({}): {v}", v.invariant()))),
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| Atom { angle: a.angle, mass: a.mass * s }).collect(),
            density: self.density.iter().map(|c| *c * s).collect(),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let len = self.density.len().max(other.density.len());
        let density = (0..len)
            .map(|k| {
                self.density.get(k).copied().unwrap_or_else(czero)
                    + other.density.get(k).copied().unwrap_or_else(czero)
            })
            .collect();
        Self::from_parts(atoms, density, T::zero())
    }

    /// Poisson integral `P_ν(z) = (1/2π) Σ_n ν̂(n) r^{|n|} e^{inθ}` with the
    /// series truncated once the atomic tail drops below `1e-15·ν(𝕋)`.
    pub fn poisson_integral(&self, z: Complex<T>) -> Result<T> {
        let r = z.norm_sqr().sqrt();
        if !(r < T::one()) {
            return Err(Error::Domain(format!(
                "Poisson integral needs |z| < 1, got {}",
                to_f64(r)
            )));
        }
        let n_cut = self.series_cutoff(r);
        let two: T = lit(2.0);
        let mut acc = self.fourier_coeff(0).re;
        let mut zn = creal::<T>(T::one());
        for n in 1..=n_cut {
            zn *= z;
            acc += two * (self.fourier_coeff(n as i64) * zn).re;
        }
        Ok(acc / T::two_pi())
    }

    fn series_cutoff(&self, r: T) -> usize {
        let band = self.bandwidth();
        if !self.has_atoms() || r == T::zero() {
            return band;
        }
        // Tail of the atomic part is bounded by 2·m·r^{N+1}/(1-r).
        let m = self.atom_mass();
        if m == T::zero() {
            return band;
        }
        let target = tol::<T>(1e-16) * self.total_mass().max(T::one());
        let mut n = 0usize;
        let mut rn = r;
        let one_minus = T::one() - r;
        let two: T = lit(2.0);
        while two * m * rn / one_minus > target && n < 50_000_000 {
            rn *= r;
            n += 1;
        }
        n.max(band)
    }

    /// Poisson integral from the closed-form kernel for the atoms and the
    /// harmonic extension `Σ c_k r^{|k|} e^{ikθ}` for the density. No series
    /// truncation is involved.
    pub fn poisson_kernel_sum(&self, z: Complex<T>) -> Result<T> {
        let r2 = z.norm_sqr();
        if !(r2 < T::one()) {
            return Err(Error::Domain("Poisson integral needs |z| < 1".into()));
        }
        let mut acc = T::zero();
        for a in &self.atoms {
            acc += a.mass * poisson_kernel(z, cis(a.angle)) / T::two_pi();
        }
        if let Some(&c0) = self.density.first() {
            let two: T = lit(2.0);
            acc += c0.re;
            let mut zk = creal::<T>(T::one());
            for c in self.density.iter().skip(1) {
                zk *= z;
                acc += two * (*c * zk).re;
            }
        }
        Ok(acc)
    }
}

/// `P(z, ξ) = (1 - |z|²) / |ξ - z|²`.
pub fn poisson_kernel<T: Real>(z: Complex<T>, xi: Complex<T>) -> T {
    (T::one() - z.norm_sqr()) / (xi - z).norm_sqr()
}

impl<T: Real> FourierData<T> for FourierMeasure<T> {
    fn fourier_coeff(&self, n: i64) -> Complex<T> {
        FourierMeasure::fourier_coeff(self, n)
    }
}

/// Explicit Fourier data `ν̂(0..=K)`; negative indices by conjugation and
/// zero beyond `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable<T: Real = f64> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FourierTable<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        Self { coeffs }
    }

    pub fn from_measure(nu: &FourierMeasure<T>, k_max: usize) -> Self {
        Self::new((0..=k_max).map(|k| nu.fourier_coeff(k as i64)).collect())
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Trigonometric-polynomial representative `c_k = ν̂(k)/2π`.
    /// The result may fail positivity even when the data is positive.
    pub fn density_representative(&self) -> FourierMeasure<T> {
        let density = self.coeffs.iter().map(|c| *c / T::two_pi()).collect();
        FourierMeasure::from_parts(Vec::new(), density, T::zero())
    }
}

impl<T: Real> FourierData<T> for FourierTable<T> {
    fn fourier_coeff(&self, n: i64) -> Complex<T> {
        let idx = n.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(&c) if n >= 0 => c,
            Some(&c) => c.conj(),
            None => czero(),
        }
    }
}

/// `μ = μ₁ × μ₂` on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMeasure<T: Real = f64> {
    pub mu1: FourierMeasure<T>,
    pub mu2: FourierMeasure<T>,
}

impl<T: Real> ProductMeasure<T> {
    pub fn new(mu1: FourierMeasure<T>, mu2: FourierMeasure<T>) -> Self {
        Self { mu1, mu2 }
    }

    /// Lebesgue × Lebesgue: the classical Dirichlet space `D ⊗ D`.
    pub fn classical() -> Self {
        Self::new(FourierMeasure::classical(), FourierMeasure::classical())
    }

    /// Zero measure: the Hardy space of the bidisc.
    pub fn hardy() -> Self {
        Self::new(FourierMeasure::zero(), FourierMeasure::zero())
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        self.mu1.validate()?;
        self.mu2.validate()
    }

    /// Margin to use when comparing compressed adjoints on a central block:
    /// the larger of density bandwidth + 1 and half the degree.
    pub fn adjoint_margin(&self, degree: usize) -> usize {
        let band = self.mu1.bandwidth().max(self.mu2.bandwidth()) + 1;
        band.max(degree / 2)
    }

    /// `P_μ(z₁, z₂) = P_{μ₁}(z₁) P_{μ₂}(z₂)`.
    pub fn poisson_integral(&self, z1: Complex<T>, z2: Complex<T>) -> Result<T> {
        Ok(self.mu1.poisson_integral(z1)? * self.mu2.poisson_integral(z2)?)
    }
}
