//! The bidisc space `D²(μ)` on polynomials of bounded bidegree: Gram matrix,
//! the three semi-norms, quadrature oracles, tails, dilations, slices and the
//! truncated reproducing kernel.

mod bipoly;
mod gram;
mod quadrature;
mod seminorm;

pub use bipoly::{BiPoly, Slice};
pub use gram::{gram_2d, kernel_eval, norm_sq, Gram2D};
pub use quadrature::{gauss_legendre, gauss_legendre_on};
pub use seminorm::{
    circle_energy, norm_sq_split, seminorm_quadrature, seminorm_series, tail_energy_sum, Which,
    DEFAULT_ANGULAR_NODES, DEFAULT_RADIAL_NODES,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet1d::gram_1d;
    use crate::measures::{Atom, FourierMeasure, ProductMeasure};
    use crate::scalar::{cplx, creal, czero};
    use approx::assert_relative_eq;
    use nalgebra::Complex;
    use std::f64::consts::PI;

    fn dirac() -> FourierMeasure<f64> {
        FourierMeasure::dirac(0.0, 1.0)
    }

    fn mixed_measure() -> ProductMeasure<f64> {
        let mu1 = FourierMeasure::from_parts(
            vec![Atom { angle: 1.1, mass: 0.6 }],
            vec![creal(0.5), cplx(0.12, -0.08)],
            0.0,
        );
        let mu2 = FourierMeasure::from_parts(
            vec![Atom { angle: 4.2, mass: 0.9 }, Atom { angle: 0.3, mass: 0.2 }],
            vec![creal(0.3), cplx(-0.05, 0.1), cplx(0.02, 0.03)],
            0.0,
        );
        ProductMeasure::new(mu1, mu2)
    }

    fn sample_poly() -> BiPoly<f64> {
        BiPoly::from_terms(
            &[
                (0, 0, cplx(0.4, -0.1)),
                (1, 0, cplx(0.2, 0.5)),
                (0, 2, cplx(-0.3, 0.2)),
                (2, 1, cplx(0.7, 0.1)),
                (1, 3, cplx(-0.2, -0.6)),
                (3, 2, cplx(0.1, 0.3)),
            ],
            0,
            0,
        )
    }

    #[test]
    fn classical_gram_diagonal() {
        let g = gram_2d(&ProductMeasure::<f64>::classical(), 3, 4).unwrap();
        for m in 0..=3 {
            for n in 0..=4 {
                let e = g.entry((m, n), (m, n));
                assert_relative_eq!(e.re, ((m + 1) * (n + 1)) as f64, epsilon = 1e-13);
            }
        }
        assert!(g.entry((1, 0), (0, 1)).norm() < 1e-15);
    }

    #[test]
    fn hardy_gram_is_identity() {
        let g = gram_2d(&ProductMeasure::<f64>::hardy(), 2, 3).unwrap();
        assert_eq!(g.dense(), nalgebra::DMatrix::identity(12, 12));
    }

    #[test]
    fn dirac_dirac_entry() {
        let mu = ProductMeasure::new(dirac(), dirac());
        let g = gram_2d(&mu, 2, 2).unwrap();
        let want = (1.0 + 1.0 / (2.0 * PI)).powi(2);
        assert_relative_eq!(g.entry((1, 1), (1, 1)).re, want, epsilon = 1e-15);
    }

    #[test]
    fn four_term_formula_equals_kronecker() {
        let mu = mixed_measure();
        let g = gram_2d(&mu, 4, 5).unwrap();
        let diff = g.dense() - g.kronecker();
        assert!(diff.iter().all(|z| z.norm() <= 1e-14));
        let g1 = gram_1d(&mu.mu1, 4).unwrap();
        assert_eq!(g.factor1().matrix(), g1.matrix());
    }

    #[test]
    fn norm_examples() {
        let z1z2 = BiPoly::<f64>::monomial(1, 1);
        assert_relative_eq!(norm_sq(&ProductMeasure::classical(), &z1z2).unwrap(), 4.0, epsilon = 1e-13);
        let one = BiPoly::constant(creal(1.0));
        assert_relative_eq!(norm_sq(&mixed_measure(), &one).unwrap(), 1.0, epsilon = 1e-15);
        let mu = ProductMeasure::new(dirac(), dirac());
        assert_relative_eq!(
            norm_sq(&mu, &z1z2).unwrap(),
            (1.0 + 1.0 / (2.0 * PI)).powi(2),
            epsilon = 1e-14
        );
    }

    #[test]
    fn norm_paths_agree() {
        let mu = mixed_measure();
        let f = sample_poly();
        let a = norm_sq(&mu, &f).unwrap();
        let b = norm_sq_split(&mu, &f).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_slot() {
        let mu = mixed_measure();
        let g = gram_2d(&mu, 3, 3).unwrap();
        let f = sample_poly();
        let h = BiPoly::from_terms(&[(1, 1, cplx(0.0, 1.0)), (2, 0, creal(0.5))], 3, 3);
        let i = cplx(0.0, 1.0);
        let a = g.inner(&f, &h.scale(i)).unwrap();
        let b = g.inner(&f, &h).unwrap() * i.conj();
        assert!((a - b).norm() < 1e-14);
        let swapped = g.inner(&h, &f).unwrap().conj();
        assert!((g.inner(&f, &h).unwrap() - swapped).norm() < 1e-14);
    }

    #[test]
    fn seminorm_series_examples() {
        let cl = ProductMeasure::<f64>::classical();
        let z1z2 = BiPoly::monomial(1, 1);
        for r in [0.3, 0.9, 1.0] {
            let v = seminorm_series(&cl, &z1z2, Which::First, r).unwrap();
            assert_relative_eq!(v, r * r, epsilon = 1e-14);
        }
        assert_relative_eq!(seminorm_series(&cl, &z1z2, Which::Mixed, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        let c = BiPoly::constant(cplx(2.0, 1.0));
        for w in Which::ALL {
            assert_eq!(seminorm_series(&mixed_measure(), &c, w, 0.7).unwrap(), 0.0);
        }
        assert!(seminorm_series(&cl, &z1z2, Which::First, 0.0).is_err());
        assert!(seminorm_series(&cl, &z1z2, Which::First, 1.1).is_err());
    }

    // Brute-force quadruple sum straight from the series definitions.
    fn series_oracle(mu: &ProductMeasure<f64>, f: &BiPoly<f64>, which: Which, r: f64) -> f64 {
        let (d1, d2) = f.degrees();
        let m = |nu: &FourierMeasure<f64>, j: usize, k: usize| -> Complex<f64> {
            nu.fourier_coeff(k as i64 - j as i64) * (j.min(k) as f64) * r.powi(2 * j.max(k) as i32)
        };
        let mut acc = czero::<f64>();
        for a in 0..=d1 {
            for b in 0..=d2 {
                for p in 0..=d1 {
                    for q in 0..=d2 {
                        let t = f.coeff(a, b) * f.coeff(p, q).conj();
                        acc += match which {
                            Which::First if b == q => m(&mu.mu1, a, p) * t / (2.0 * PI),
                            Which::Second if a == p => m(&mu.mu2, b, q) * t / (2.0 * PI),
                            Which::Mixed => m(&mu.mu1, a, p) * m(&mu.mu2, b, q) * t / (4.0 * PI * PI),
                            _ => czero(),
                        };
                    }
                }
            }
        }
        acc.re
    }

    #[test]
    fn series_matches_brute_force() {
        let mu = mixed_measure();
        let f = sample_poly();
        for w in Which::ALL {
            for r in [0.5, 0.9, 1.0] {
                let a = seminorm_series(&mu, &f, w, r).unwrap();
                let b = series_oracle(&mu, &f, w, r);
                assert_relative_eq!(a, b, max_relative = 1e-13, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn quadrature_examples() {
        let cl = ProductMeasure::<f64>::classical();
        let z1z2 = BiPoly::monomial(1, 1);
        let q = seminorm_quadrature(&cl, &z1z2, Which::First, 0.9, 32, 256).unwrap();
        assert!((q - 0.81).abs() < 1e-6);
        let c = BiPoly::constant(creal(1.0));
        for w in Which::ALL {
            assert!(seminorm_quadrature(&cl, &c, w, 0.9, 32, 256).unwrap().abs() < 1e-12);
        }
        let mu = ProductMeasure::new(dirac(), FourierMeasure::classical());
        let z1sq = BiPoly::monomial(2, 0);
        let s = seminorm_series(&mu, &z1sq, Which::First, 0.8).unwrap();
        let q = seminorm_quadrature(&mu, &z1sq, Which::First, 0.8, 32, 256).unwrap();
        assert!((s - q).abs() < 1e-6 * (1.0 + s));
    }

    #[test]
    fn quadrature_matches_series_for_mixed_measure() {
        let mu = mixed_measure();
        let f = sample_poly();
        for w in Which::ALL {
            for r in [0.5, 0.9] {
                let s = seminorm_series(&mu, &f, w, r).unwrap();
                let q = seminorm_quadrature(&mu, &f, w, r, 32, 256).unwrap();
                assert!((s - q).abs() <= 1e-9 * (1.0 + s), "{w:?} R={r}: {s} vs {q}");
            }
        }
    }

    #[test]
    fn quadrature_resolution_guard() {
        let f = sample_poly();
        let mu = mixed_measure();
        assert!(matches!(
            seminorm_quadrature(&mu, &f, Which::First, 0.5, 3, 256),
            Err(crate::Error::Resolution(_))
        ));
        assert!(matches!(
            seminorm_quadrature(&mu, &f, Which::First, 0.5, 32, 6),
            Err(crate::Error::Resolution(_))
        ));
    }

    #[test]
    fn tail_decomposition() {
        let mu = mixed_measure();
        let f = sample_poly();
        for w in Which::ALL {
            let r = 0.7;
            let s = seminorm_series(&mu, &f, w, r).unwrap();
            let t = tail_energy_sum(&mu, &f, w, r, 160).unwrap();
            assert!((s - t).abs() <= 1e-10 * (1.0 + s), "{w:?}: {s} vs {t}");
        }
    }

    #[test]
    fn kernel_examples() {
        let cl = ProductMeasure::<f64>::classical();
        let o = (czero(), czero());
        assert_relative_eq!(kernel_eval(&mixed_measure(), 4, 4, o, o).unwrap().re, 1.0, epsilon = 1e-14);
        let one = -(0.75f64).ln() / 0.25;
        let p = (creal(0.5), czero());
        let k = kernel_eval(&cl, 32, 32, p, p).unwrap();
        assert!((k.re - one).abs() < 1e-8 && k.im.abs() < 1e-14);
        assert!((k.re - 1.150_728_3).abs() < 1e-7);
        let p = (creal(0.5), creal(0.5));
        let k = kernel_eval(&cl, 32, 32, p, p).unwrap();
        assert!((k.re - one * one).abs() < 1e-8);
        assert!((k.re - 1.324_175_6).abs() < 1e-7);
    }

    #[test]
    fn kernel_reproduces_point_values() {
        let mu = mixed_measure();
        let g = gram_2d(&mu, 3, 2).unwrap();
        let w = (cplx(0.3, -0.4), cplx(-0.5, 0.2));
        let kw = g.kernel_vector(w.0, w.1);
        for m in 0..=3 {
            for n in 0..=2 {
                let f = BiPoly::monomial(m, n);
                let lhs = g.inner(&f, &kw).unwrap();
                let rhs = f.eval(w.0, w.1);
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
        let z = (cplx(0.1, 0.6), cplx(0.2, 0.2));
        let k1 = gram_1d(&mu.mu1, 3).unwrap();
        let k2 = gram_1d(&mu.mu2, 2).unwrap();
        let kern1 = |g: &crate::dirichlet1d::Gram1D<f64>, z: Complex<f64>, w: Complex<f64>| {
            let inv = g.matrix().clone().try_inverse().unwrap();
            let d = g.degree();
            let mut s = czero::<f64>();
            for a in 0..=d {
                for b in 0..=d {
                    s += z.powu(a as u32) * inv[(b, a)] * w.conj().powu(b as u32);
                }
            }
            s
        };
        let product = kern1(&k1, z.0, w.0) * kern1(&k2, z.1, w.1);
        assert!((g.kernel(z, w) - product).norm() < 1e-12);
    }

    #[test]
    fn kernel_rejects_points_outside() {
        let p = (creal(1.0), czero());
        assert!(kernel_eval(&ProductMeasure::<f64>::classical(), 2, 2, p, p).is_err());
    }
}
