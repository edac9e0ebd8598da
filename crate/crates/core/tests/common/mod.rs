#![allow(dead_code)]

use std::f64::consts::TAU;

use dirichlet_bidisc::dirichlet2d::BiPoly;
use dirichlet_bidisc::{Atom, Complex, FourierMeasure, ProductMeasure};
use proptest::prelude::*;
use rand::Rng;

/// Density coefficients with `Σ_{k≥1} 2|c_k| ≤ 0.9 c_0`, so the density is
/// bounded below by `0.1 c_0`.
fn safe_density(c0: f64, raw: &[(f64, f64)]) -> Vec<Complex<f64>> {
    let cap = 0.45 * c0 / raw.len().max(1) as f64;
    let mut out = vec![Complex::new(c0, 0.0)];
    out.extend(raw.iter().map(|&(r, ph)| Complex::from_polar(r * cap, ph)));
    out
}

prop_compose! {
    /// Trig-polynomial density plus optional Lebesgue part; no atoms.
    pub fn band_limited()(
        c0 in 0.05f64..1.5,
        raw in prop::collection::vec((0.0f64..1.0, 0.0..TAU), 0..=3),
        leb in prop_oneof![Just(0.0), 0.0f64..TAU],
    ) -> FourierMeasure<f64> {
        FourierMeasure::from_parts(Vec::new(), safe_density(c0, &raw), leb)
    }
}

prop_compose! {
    pub fn atomic()(
        atoms in prop::collection::vec((0.0f64..TAU, 0.05f64..1.5), 1..=3),
    ) -> FourierMeasure<f64> {
        let atoms = atoms.into_iter().map(|(angle, mass)| Atom { angle, mass }).collect();
        FourierMeasure::from_parts(atoms, Vec::new(), 0.0)
    }
}

prop_compose! {
    pub fn mixed()(
        a in atomic(),
        b in band_limited(),
    ) -> FourierMeasure<f64> {
        a.sum(&b)
    }
}

pub fn measure() -> impl Strategy<Value = FourierMeasure<f64>> {
    prop_oneof![
        1 => Just(FourierMeasure::zero()),
        1 => Just(FourierMeasure::classical()),
        3 => band_limited(),
        2 => atomic(),
        2 => mixed(),
    ]
}

pub fn product() -> impl Strategy<Value = ProductMeasure<f64>> {
    (measure(), measure()).prop_map(|(a, b)| ProductMeasure::new(a, b))
}

pub fn band_limited_product() -> impl Strategy<Value = ProductMeasure<f64>> {
    (band_limited(), band_limited()).prop_map(|(a, b)| ProductMeasure::new(a, b))
}

/// Polynomial with degrees `≤ max_deg` and coefficients in the unit box.
pub fn poly(max_deg: usize) -> impl Strategy<Value = BiPoly<f64>> {
    (0..=max_deg, 0..=max_deg).prop_flat_map(|(d1, d2)| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), (d1 + 1) * (d2 + 1)).prop_map(move |c| {
            let v: Vec<_> = c.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
            BiPoly::from_matrix(nalgebra::DMatrix::from_row_slice(d1 + 1, d2 + 1, &v))
        })
    })
}

/// Point of the open disc with modulus at most `r_max`.
pub fn disc_point(r_max: f64) -> impl Strategy<Value = Complex<f64>> {
    (0.0..r_max, 0.0..TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

// Seeded generators for the acceptance suite.

pub fn random_band_limited<R: Rng>(rng: &mut R) -> FourierMeasure<f64> {
    let k = rng.random_range(1..=3);
    let c0 = rng.random_range(0.05..1.5);
    let raw: Vec<_> = (0..k).map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.0..TAU))).collect();
    let leb = if rng.random_bool(0.5) { rng.random_range(0.0..TAU) } else { 0.0 };
    FourierMeasure::from_parts(Vec::new(), safe_density(c0, &raw), leb)
}

pub fn random_atomic<R: Rng>(rng: &mut R) -> FourierMeasure<f64> {
    let n = rng.random_range(1..=3);
    let atoms = (0..n)
        .map(|_| Atom { angle: rng.random_range(0.0..TAU), mass: rng.random_range(0.05..1.5) })
        .collect();
    FourierMeasure::from_parts(atoms, Vec::new(), 0.0)
}

pub fn random_measure<R: Rng>(rng: &mut R) -> FourierMeasure<f64> {
    match rng.random_range(0..3) {
        0 => random_band_limited(rng),
        1 => random_atomic(rng),
        _ => random_atomic(rng).sum(&random_band_limited(rng)),
    }
}

pub fn random_product<R: Rng>(rng: &mut R) -> ProductMeasure<f64> {
    ProductMeasure::new(random_measure(rng), random_measure(rng))
}

pub fn random_poly<R: Rng>(rng: &mut R, max_deg: usize) -> BiPoly<f64> {
    let d1 = rng.random_range(0..=max_deg);
    let d2 = rng.random_range(0..=max_deg);
    BiPoly::from_matrix(nalgebra::DMatrix::from_fn(d1 + 1, d2 + 1, |_, _| {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }))
}
