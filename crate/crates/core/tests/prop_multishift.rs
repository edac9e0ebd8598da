mod common;

use dirichlet_bidisc::multishift::{
    apply_l, apply_t, is_commuting, is_left_inverse_commuting, joint_kernel, random_commuting,
    reducing_witness, LatticeVector, MultishiftSpec,
};
use dirichlet_bidisc::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(seed: u64, n: usize, big_n: usize, fiber: usize) -> MultishiftSpec<f64> {
    random_commuting(n, big_n, fiber, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn commuting_iff_left_inverse_commuting(
        seed in any::<u64>(),
        n in 2usize..=3,
        big_n in 2usize..=3,
        fiber in 1usize..=2,
        perturb in any::<bool>(),
        site in any::<u64>(),
        factor in prop_oneof![0.5f64..0.9, 1.1f64..2.0],
    ) {
        let mut s = spec(seed, n, big_n, fiber);
        if perturb {
            let alpha: Vec<usize> = (0..n).map(|k| ((site >> (8 * k)) as usize) % big_n).collect();
            let j = 1 + (site >> 40) as usize % n;
            s = s.perturbed(j, &alpha, Complex::new(factor, 0.0)).unwrap();
        }
        let c = is_commuting(&s);
        let l = is_left_inverse_commuting(&s).unwrap();
        prop_assert_eq!(c <= 1e-12, l <= 1e-10, "commuting {} lic {}", c, l);
        prop_assert_eq!(c <= 1e-12, !perturb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn commuting_specs_have_wandering_vectors(seed in any::<u64>(), n in 1usize..=3, big_n in 1usize..=3, fiber in 1usize..=2) {
        let s = spec(seed, n, big_n, fiber);
        prop_assert!(joint_kernel(&s).ncols() >= 1);
    }

    #[test]
    fn adjoint_kernel_reduces(seed in any::<u64>(), big_n in 2usize..=4, fiber in 1usize..=2) {
        let s = spec(seed, 2, big_n, fiber);
        prop_assert!(reducing_witness(&s, 1, 2) <= 1e-8);
        prop_assert!(reducing_witness(&s, 2, 1) <= 1e-8);
    }

    #[test]
    fn left_inverse_on_interior(seed in any::<u64>(), n in 1usize..=3, big_n in 1usize..=3, fiber in 1usize..=2, j0 in 0usize..3) {
        let s = spec(seed, n, big_n, fiber);
        let j = 1 + j0 % n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let data = nalgebra::DVector::from_fn(s.dim(), |i, _| {
            let alpha = s.alpha(i / fiber);
            if alpha[j - 1] < big_n {
                Complex::new(rand::Rng::random_range(&mut rng, -1.0..1.0), rand::Rng::random_range(&mut rng, -1.0..1.0))
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let x = LatticeVector::from_data(fiber, data);
        let (tx, spilled) = apply_t(&s, j, &x);
        prop_assert!(!spilled);
        let back = apply_l(&s, j, &tx).unwrap();
        let err = (back.data() - x.data()).norm();
        prop_assert!(err <= 1e-12 * (1.0 + x.norm()), "error {err}");
    }
}
