//! Weighted Dirichlet spaces on the bidisc.
//!
//! The space `D(μ)` attached to a product measure `μ = μ₁ × μ₂` on the torus
//! is modelled on polynomials of bounded bidegree. Its Gram matrix factors as
//! a Kronecker product of two one-variable Gram matrices, which the crate
//! uses to keep solves cheap at moderate degrees. Around that core sit
//! compressed shift operators, abstract operator-weighted multishifts, the
//! comparison with the Chavan-type space and an inverse routine that recovers
//! the measures from a table of moments.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases cover the common double-precision case.

pub mod comparison;
pub mod dirichlet1d;
pub mod dirichlet2d;
pub mod error;
pub mod extraction;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod multishift;
pub mod operators;
pub mod scalar;

pub use error::{Error, Result};
pub use measures::{Atom, FourierData, FourierMeasure, FourierTable, ProductMeasure, Violation};
pub use scalar::Real;

pub use nalgebra::Complex;

/// Hard cap on the per-variable degree accepted by builders.
pub const MAX_DEGREE: usize = 64;

pub type Measure64 = FourierMeasure<f64>;
pub type ProductMeasure64 = ProductMeasure<f64>;
pub type Measure32 = FourierMeasure<f32>;
pub type ProductMeasure32 = ProductMeasure<f32>;
pub type Complex64 = Complex<f64>;
