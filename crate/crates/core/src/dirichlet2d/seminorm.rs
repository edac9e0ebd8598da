use nalgebra::{Complex, DMatrix};

use crate::dirichlet1d::mnu_matrix;
use crate::error::{Error, Result};
use crate::measures::{FourierMeasure, ProductMeasure};
use crate::scalar::{cis, czero, from_usize, lit, to_f64, Real};

use super::bipoly::BiPoly;
use super::quadrature::gauss_legendre_on;

/// Default radial node count for [`seminorm_quadrature`].
pub const DEFAULT_RADIAL_NODES: usize = 32;
/// Default angular node count for [`seminorm_quadrature`].
pub const DEFAULT_ANGULAR_NODES: usize = 256;

/// Selects one of the three semi-norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    /// Slice integral in `z₁` against `P_{μ₁}`.
    First,
    /// Slice integral in `z₂` against `P_{μ₂}`.
    Second,
    /// Mixed-derivative integral against `P_μ`.
    Mixed,
}

impl Which {
    pub const ALL: [Which; 3] = [Which::First, Which::Second, Which::Mixed];

    pub fn index(self) -> u8 {
        match self {
            Which::First => 1,
            Which::Second => 2,
            Which::Mixed => 3,
        }
    }
}

impl TryFrom<u8> for Which {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Which::First),
            2 => Ok(Which::Second),
            3 => Ok(Which::Mixed),
            _ => Err(Error::Domain(format!("semi-norm selector must be 1, 2 or 3, got {v}"))),
        }
    }
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r > T::zero() && r <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("R must lie in (0, 1], got {}", to_f64(r))))
    }
}

/// `M_ν(j,k) R^{2(j∨k)}` on `0..size`.
fn weighted_mnu<T: Real>(nu: &FourierMeasure<T>, size: usize, r: T) -> DMatrix<Complex<T>> {
    let r2 = r * r;
    let mut m = mnu_matrix(nu, size);
    for j in 0..size {
        for k in 0..size {
            m[(j, k)] *= r2.powi(j.max(k) as i32);
        }
    }
    m
}

fn sum_product<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> Complex<T> {
    a.component_mul(b).iter().fold(czero(), |s, z| s + *z)
}

/// Semi-norm `D_{μ,i}(f, R)` from the coefficient series.
///
/// `R = 1` gives the full semi-norm of the polynomial.
pub fn seminorm_series<T: Real>(mu: &ProductMeasure<T>, f: &BiPoly<T>, which: Which, r: T) -> Result<T> {
    check_radius(r)?;
    let (d1, d2) = f.degrees();
    let a = f.matrix();
    let two_pi = T::two_pi();
    let value = match which {
        Which::First => {
            let m1 = weighted_mnu(&mu.mu1, d1 + 1, r);
            sum_product(&m1, &(a * a.adjoint())) / two_pi
        }
        Which::Second => {
            let m2 = weighted_mnu(&mu.mu2, d2 + 1, r);
            sum_product(&m2, &(a.transpose() * a.conjugate())) / two_pi
        }
        Which::Mixed => {
            let m1 = weighted_mnu(&mu.mu1, d1 + 1, r);
            let m2 = weighted_mnu(&mu.mu2, d2 + 1, r);
            sum_product(&m1, &(a * m2 * a.adjoint())) / (two_pi * two_pi)
        }
    };
    Ok(value.re)
}

/// `‖f‖²_{H²} + D_{μ,1}(f) + D_{μ,2}(f) + D_{μ,3}(f)`.
pub fn norm_sq_split<T: Real>(mu: &ProductMeasure<T>, f: &BiPoly<T>) -> Result<T> {
    let mut total = f.hardy_norm_sq();
    for which in Which::ALL {
        total += seminorm_series(mu, f, which, T::one())?;
    }
    Ok(total)
}

/// `I(j,k) = ∫_{R𝔻} z^j conj(z)^k P_ν(z) dA(z)` for `0 ≤ j,k < size`, with
/// normalised area measure, Gauss–Legendre in radius and the trapezoid rule
/// in angle.
fn disc_moments<T: Real>(
    nu: &FourierMeasure<T>,
    size: usize,
    r: T,
    n_rad: usize,
    n_ang: usize,
) -> Result<DMatrix<Complex<T>>> {
    let mut out = DMatrix::from_element(size, size, czero());
    if size == 0 {
        return Ok(out);
    }
    let (rho, w_rho) = gauss_legendre_on(n_rad, T::zero(), r);
    let h = T::two_pi() / from_usize::<T>(n_ang);
    let mut powers = vec![czero::<T>(); size];
    for (&rho_i, &w_i) in rho.iter().zip(&w_rho) {
        for l in 0..n_ang {
            let z = cis(h * from_usize::<T>(l)) * rho_i;
            let p = nu.poisson_kernel_sum(z)?;
            let weight = w_i * rho_i * h / T::pi() * p;
            let mut zp = Complex::new(T::one(), T::zero());
            for slot in powers.iter_mut() {
                *slot = zp;
                zp *= z;
            }
            for j in 0..size {
                let left = powers[j] * weight;
                for k in 0..size {
                    out[(j, k)] += left * powers[k].conj();
                }
            }
        }
    }
    Ok(out)
}

/// `J(n,q) = ∫₀^{2π} e^{i(n-q)t} dt` by the `n_ang`-point trapezoid rule.
fn circle_moments<T: Real>(size: usize, n_ang: usize) -> DMatrix<Complex<T>> {
    let h = T::two_pi() / from_usize::<T>(n_ang);
    DMatrix::from_fn(size, size, |n, q| {
        let k = n as i64 - q as i64;
        (0..n_ang).fold(czero(), |s, l| s + cis(h * lit::<T>((k * l as i64) as f64))) * h
    })
}

/// Independent evaluation of `D_{μ,i}(f, R)` from the defining integrals.
///
/// Uses a tensor-product rule (Gauss–Legendre in radius, trapezoid in every
/// angle) over `R𝔻 × 𝕋`, `𝕋 × R𝔻` or `R𝔻 × R𝔻`, with the torus variable on
/// the unit circle. The rule is applied in factorised form: one-dimensional
/// moment integrals are computed first and contracted with the derivative
/// coefficients. Needs `n_rad ≥ d + 1` and `n_ang ≥ 2d + 1` where `d` is the
/// larger degree of `f`.
pub fn seminorm_quadrature<T: Real>(
    mu: &ProductMeasure<T>,
    f: &BiPoly<T>,
    which: Which,
    r: T,
    n_rad: usize,
    n_ang: usize,
) -> Result<T> {
    check_radius(r)?;
    let (d1, d2) = f.degrees();
    let d = d1.max(d2);
    if n_rad < d + 1 || n_ang < 2 * d + 1 {
        return Err(Error::Resolution(format!(
            "degree {d} needs at least {} radial and {} angular nodes, got {n_rad} and {n_ang}",
            d + 1,
            2 * d + 1
        )));
    }
    let two_pi = T::two_pi();
    let value = match which {
        Which::First => {
            if d1 == 0 {
                return Ok(T::zero());
            }
            let b = f.derivative(1);
            let b = b.matrix();
            let i1 = disc_moments(&mu.mu1, d1, r, n_rad, n_ang)?;
            let j = circle_moments::<T>(d2 + 1, n_ang);
            sum_product(&i1, &(b * j * b.adjoint())) / two_pi
        }
        Which::Second => {
            if d2 == 0 {
                return Ok(T::zero());
            }
            let c = f.derivative(2);
            let c = c.matrix();
            let i2 = disc_moments(&mu.mu2, d2, r, n_rad, n_ang)?;
            let j = circle_moments::<T>(d1 + 1, n_ang);
            sum_product(&j, &(c * i2 * c.adjoint())) / two_pi
        }
        Which::Mixed => {
            if d1 == 0 || d2 == 0 {
                return Ok(T::zero());
            }
            let e = f.derivative(3);
            let e = e.matrix();
            let i1 = disc_moments(&mu.mu1, d1, r, n_rad, n_ang)?;
            let i2 = disc_moments(&mu.mu2, d2, r, n_rad, n_ang)?;
            sum_product(&i1, &(e * i2 * e.adjoint()))
        }
    };
    Ok(value.re)
}

/// `(1/4π²) ∬ |g|² P ds dt` over a pair of circles: radius `R` in the
/// variable(s) carrying a Poisson weight, radius 1 in a free torus variable.
///
/// For [`Which::First`] the integrand is `|g(Re^{is}, e^{it})|² P_{μ₁}(Re^{is})`,
/// for [`Which::Second`] the roles of the variables swap, and for
/// [`Which::Mixed`] both variables sit on the `R`-circle against `P_μ`. The
/// Poisson integral is the truncated Fourier series; the angles use an
/// `n_ang`-point trapezoid rule.
pub fn circle_energy<T: Real>(
    mu: &ProductMeasure<T>,
    g: &BiPoly<T>,
    which: Which,
    r: T,
    n_ang: usize,
) -> Result<T> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::Domain(format!("circle radius must lie in (0, 1), got {}", to_f64(r))));
    }
    let h = T::two_pi() / from_usize::<T>(n_ang);
    let circle: Vec<Complex<T>> = (0..n_ang).map(|l| cis(h * from_usize::<T>(l))).collect();
    let weights = |nu: &FourierMeasure<T>| -> Result<Vec<T>> {
        circle.iter().map(|&e| nu.poisson_integral(e * r)).collect()
    };
    let mut acc = T::zero();
    match which {
        Which::First => {
            let p1 = weights(&mu.mu1)?;
            for (s, &e1) in circle.iter().enumerate() {
                let row = circle.iter().fold(T::zero(), |a, &e2| a + g.eval(e1 * r, e2).norm_sqr());
                acc += row * p1[s];
            }
        }
        Which::Second => {
            let p2 = weights(&mu.mu2)?;
            for (s, &e2) in circle.iter().enumerate() {
                let row = circle.iter().fold(T::zero(), |a, &e1| a + g.eval(e1, e2 * r).norm_sqr());
                acc += row * p2[s];
            }
        }
        Which::Mixed => {
            let p1 = weights(&mu.mu1)?;
            let p2 = weights(&mu.mu2)?;
            for (s1, &e1) in circle.iter().enumerate() {
                for (s2, &e2) in circle.iter().enumerate() {
                    acc += g.eval(e1 * r, e2 * r).norm_sqr() * p1[s1] * p2[s2];
                }
            }
        }
    }
    let two_pi = T::two_pi();
    Ok(acc * h * h / (two_pi * two_pi))
}

/// Right-hand side of the tail decomposition of `D_{μ,i}(f, R)`: the sum of
/// [`circle_energy`] over the tails `T_{k,0} f`, `T_{0,k} f` or `T_{k1,k2} f`.
pub fn tail_energy_sum<T: Real>(
    mu: &ProductMeasure<T>,
    f: &BiPoly<T>,
    which: Which,
    r: T,
    n_ang: usize,
) -> Result<T> {
    let (d1, d2) = f.degrees();
    let mut total = T::zero();
    match which {
        Which::First => {
            for k in 1..=d1 {
                total += circle_energy(mu, &f.tail(k, 0), which, r, n_ang)?;
            }
        }
        Which::Second => {
            for k in 1..=d2 {
                total += circle_energy(mu, &f.tail(0, k), which, r, n_ang)?;
            }
        }
        Which::Mixed => {
            for k1 in 1..=d1 {
                for k2 in 1..=d2 {
                    total += circle_energy(mu, &f.tail(k1, k2), which, r, n_ang)?;
                }
            }
        }
    }
    Ok(total)
}
