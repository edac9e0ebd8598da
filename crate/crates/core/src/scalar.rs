//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All math is written against [`Real`], which is satisfied by `f32` and
//! `f64`. Complex quantities are `Complex<T>` from `num-complex` (re-exported
//! through nalgebra), so the same code drives single and double precision.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable by the library: f32 or f64.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Machine epsilon of the type.
    fn eps() -> Self;
}

impl Real for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }
}

impl Real for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Converts a count or index into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize fits in a float")
}

/// Lossy conversion to `f64` for reporting.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Tolerance that is never tighter than a small multiple of the type's epsilon.
#[inline]
pub fn tol<T: Real>(nominal: f64) -> T {
    let t: T = lit(nominal);
    t.max(T::eps() * lit(64.0))
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Modulus of a complex number.
#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}
