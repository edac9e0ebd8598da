//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p dirichlet-bidisc --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{random_band_limited, random_measure, random_poly, random_product};
use dirichlet_bidisc::comparison::{chavan_adjoint_check, ChavanSpace};
use dirichlet_bidisc::dirichlet1d::gram_1d;
use dirichlet_bidisc::dirichlet2d::{
    gram_2d, seminorm_quadrature, seminorm_series, Slice, Which, DEFAULT_ANGULAR_NODES,
    DEFAULT_RADIAL_NODES,
};
use dirichlet_bidisc::extraction::{extract_measure_1d, model_roundtrip, MomentTable};
use dirichlet_bidisc::multishift::{
    is_commuting, is_doubly_commuting, is_left_inverse_commuting, random_commuting,
    wandering_reconstruction, MultishiftSpec,
};
use dirichlet_bidisc::operators::{
    doubly_commuting_residual, expansivity_check, left_inverse_commuting_residual,
    two_isometry_residual, wandering_reconstruction_residual, wandering_subspace, GramSpace,
};
use dirichlet_bidisc::{Complex, Error, FourierMeasure, ProductMeasure};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRAM_TOL: f64 = 1e-12;
const GRAM_TIME: Duration = Duration::from_secs(1);
const KRONECKER_TOL: f64 = 1e-14;
const KRONECKER_TIME: Duration = Duration::from_secs(5);
const ORACLE_TOL: f64 = 1e-6;
const ORACLE_TIME: Duration = Duration::from_secs(60);
const TWO_ISOMETRY_TOL: f64 = 1e-10;
const DOUBLY_TOL: f64 = 1e-8;
const CONTRAST_TOL: f64 = 1e-10;
const WANDERING_TOL: f64 = 1e-10;
const COMMUTING_TOL: f64 = 1e-12;
const LIC_TOL: f64 = 1e-10;
const NOT_DOUBLY_MIN: f64 = 1e-2;
const EXTRACTION_TOL: f64 = 1e-8;
const DILATION_TOL: f64 = 1e-12;
const PARALLELOGRAM_TOL: f64 = 1e-10;
const EXPANSIVITY_TOL: f64 = 1e-12;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn c1_classical_gram() -> Verdict {
    let t = Instant::now();
    let g = gram_2d(&ProductMeasure::<f64>::classical(), 16, 16).unwrap().dense();
    let elapsed = t.elapsed();
    let mut diag = 0.0f64;
    let mut off = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            if i == j {
                let (m, n) = (i / 17, i % 17);
                diag = diag.max((g[(i, j)] - Complex::new(((m + 1) * (n + 1)) as f64, 0.0)).norm());
            } else {
                off = off.max(g[(i, j)].norm());
            }
        }
    }
    verdict(
        diag <= GRAM_TOL && off <= GRAM_TOL && elapsed < GRAM_TIME,
        format!("diag err {diag:.1e}, off-diag {off:.1e}, {elapsed:.2?}"),
    )
}

fn c2_kronecker() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut largest = 0.0f64;
    for _ in 0..10 {
        let mu = random_product(&mut rng);
        let g = gram_2d(&mu, 10, 10).unwrap().dense();
        let k = gram_1d(&mu.mu1, 10).unwrap().matrix().kronecker(gram_1d(&mu.mu2, 10).unwrap().matrix());
        // per entry, relative to max(1, |entry|): entries reach ~10³ where one ulp exceeds 1e-14
        for (a, b) in g.iter().zip(k.iter()) {
            worst = worst.max((a - b).norm() / b.norm().max(1.0));
            largest = largest.max(b.norm());
        }
    }
    let elapsed = t.elapsed();
    verdict(
        worst <= KRONECKER_TOL && elapsed < KRONECKER_TIME,
        format!("max scaled entry diff {worst:.1e} (largest entry {largest:.0}), {elapsed:.2?}"),
    )
}

fn c3_seminorm_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mu = random_product(&mut rng);
        let f = random_poly(&mut rng, 6);
        for which in Which::ALL {
            for r in [0.5, 0.9] {
                let s = seminorm_series(&mu, &f, which, r).unwrap();
                let q = seminorm_quadrature(&mu, &f, which, r, DEFAULT_RADIAL_NODES, DEFAULT_ANGULAR_NODES).unwrap();
                worst = worst.max((s - q).abs() / (1.0 + s));
            }
        }
    }
    let elapsed = t.elapsed();
    verdict(worst <= ORACLE_TOL && elapsed < ORACLE_TIME, format!("max rel err {worst:.1e} over 600 cases, {elapsed:.2?}"))
}

fn c4_two_isometry() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let measures: Vec<_> = (0..10).map(|_| random_product(&mut rng)).collect();
    let mut worst = 0.0f64;
    for mu in &measures {
        for _ in 0..200 {
            let f = random_poly(&mut rng, 6);
            for i in [1, 2] {
                worst = worst.max(two_isometry_residual(mu, &f, i).unwrap());
            }
        }
    }
    verdict(worst <= TWO_ISOMETRY_TOL, format!("max residual {worst:.1e} over 4000 cases"))
}

fn c5_left_inverse_commuting() -> Verdict {
    let mut worst = 0.0f64;
    for d1 in 0..=16 {
        for d2 in 0..=16 {
            worst = worst.max(left_inverse_commuting_residual::<f64>(d1, d2));
        }
    }
    verdict(worst == 0.0, format!("max entry {worst:e} over 289 degree profiles"))
}

fn c6_doubly_commuting() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = [
        ("classical", ProductMeasure::classical()),
        ("dirac x dirac", ProductMeasure::new(FourierMeasure::dirac(0.0, 1.0), FourierMeasure::dirac(0.0, 1.0))),
        ("band-limited", ProductMeasure::new(random_band_limited(&mut rng), random_band_limited(&mut rng))),
        ("band-limited", ProductMeasure::new(random_band_limited(&mut rng), random_band_limited(&mut rng))),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, mu) in &cases {
        let margin = mu.adjoint_margin(12);
        let r = doubly_commuting_residual(mu, 12, margin).unwrap();
        pass &= r <= DOUBLY_TOL;
        parts.push(format!("{name} {r:.1e} (margin {margin})"));
    }
    verdict(pass, parts.join(", "))
}

fn c7_contrast() -> Verdict {
    let ch = chavan_adjoint_check(&ChavanSpace::<f64>::classical(), 6).unwrap();
    let d2 = doubly_commuting_residual(&ProductMeasure::<f64>::classical(), 6, 1).unwrap();
    let gap = (ch.commutator_at_11 - 1.0 / 6.0).abs();
    verdict(
        gap <= CONTRAST_TOL && d2 <= CONTRAST_TOL,
        format!("chavan (1,1) entry {:.12}, D² commutator {d2:.1e}", ch.commutator_at_11),
    )
}

fn c8_wandering() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut dims = Vec::new();
    for _ in 0..10 {
        let mu = random_product(&mut rng);
        match wandering_subspace(&mu, 8, 8) {
            Ok(w) => dims.push(w.len()),
            Err(Error::Rank { found, .. }) => dims.push(found),
            Err(e) => return verdict(false, e.to_string()),
        }
        worst = worst.max(wandering_reconstruction_residual(&mu, 8, 8).unwrap());
    }
    let pass = dims.iter().all(|&d| d == 1) && worst <= WANDERING_TOL;
    verdict(pass, format!("dims {dims:?}, max reconstruction residual {worst:.1e}"))
}

fn c9_multishift() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut agree = 0;
    let mut commuting = 0;
    for k in 0..100 {
        let n = rng.random_range(2..=3);
        let big_n = rng.random_range(2..=3);
        let fiber = rng.random_range(1..=2);
        let mut spec: MultishiftSpec<f64> = random_commuting(n, big_n, fiber, &mut rng);
        if k % 2 == 1 {
            let alpha: Vec<usize> = (0..n).map(|_| rng.random_range(0..big_n)).collect();
            let j = rng.random_range(1..=n);
            spec = spec.perturbed(j, &alpha, Complex::new(rng.random_range(1.1..2.0), 0.0)).unwrap();
        }
        let c = is_commuting(&spec) <= COMMUTING_TOL;
        let l = is_left_inverse_commuting(&spec).unwrap() <= LIC_TOL;
        commuting += c as usize;
        agree += (c == l) as usize;
    }
    let dl = MultishiftSpec::<f64>::dirichlet_like(2, 5);
    let doubly = is_doubly_commuting(&dl).unwrap();
    let wander = wandering_reconstruction(&dl).unwrap();
    verdict(
        agree == 100 && commuting == 50 && doubly >= NOT_DOUBLY_MIN && wander <= WANDERING_TOL,
        format!("{agree}/100 agree ({commuting} commuting); |α|-weights doubly {doubly:.2e}, wandering {wander:.1e}"),
    )
}

fn c10_model_roundtrip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mu = ProductMeasure::new(random_measure(&mut rng), random_measure(&mut rng));
        let table = MomentTable::from_gram(&gram_2d(&mu, 10, 10).unwrap());
        let r = model_roundtrip(&table).unwrap();
        for k in 0..=9 {
            worst = worst.max((r.nu1.coeffs[k] - mu.mu1.fourier_coeff(k as i64)).norm());
            worst = worst.max((r.nu2.coeffs[k] - mu.mu2.fourier_coeff(k as i64)).norm());
        }
        worst = worst.max(r.roundtrip_dev);
    }
    let bergman = DMatrix::from_fn(8, 8, |i, j| if i == j { Complex::new(1.0 / (i as f64 + 1.0), 0.0) } else { Complex::new(0.0, 0.0) });
    let rejected = matches!(extract_measure_1d(&bergman), Err(Error::InconsistentMoments(_)));
    verdict(
        worst <= EXTRACTION_TOL && rejected,
        format!("max coefficient/table err {worst:.1e}, Bergman rejected: {rejected}"),
    )
}

fn c11_property_suites() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = 0;
    for _ in 0..500 {
        let mu = random_product(&mut rng);
        let f = random_poly(&mut rng, 5).resized(5, 5).unwrap();
        let g = random_poly(&mut rng, 5).resized(5, 5).unwrap();
        let which = Which::ALL[rng.random_range(0..3)];
        let full = seminorm_series(&mu, &f, which, 1.0).unwrap();
        for r in [0.3, 0.7, 0.95] {
            let dil = seminorm_series(&mu, &f.dilate(r).unwrap(), which, 1.0).unwrap();
            violations += (dil > full + DILATION_TOL * (1.0 + full)) as usize;
        }
        for s in [Slice::Z1Zero, Slice::Z2Zero] {
            let sl = seminorm_series(&mu, &f.slice(s), which, 1.0).unwrap();
            violations += (sl > full + DILATION_TOL * (1.0 + full)) as usize;
        }
        let nf = mu.norm_sq(&f).unwrap();
        let ng = mu.norm_sq(&g).unwrap();
        let lhs = mu.norm_sq(&f.add(&g)).unwrap() + mu.norm_sq(&f.sub(&g)).unwrap();
        violations += ((lhs - 2.0 * (nf + ng)).abs() > PARALLELOGRAM_TOL * (1.0 + nf + ng)) as usize;
        for i in [1, 2] {
            violations += (expansivity_check(&mu, &f, i).unwrap() < -EXPANSIVITY_TOL) as usize;
        }
    }
    verdict(violations == 0, format!("{violations} violations over 500 cases"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 11] = [
        ("classical Gram", c1_classical_gram),
        ("Kronecker factorisation", c2_kronecker),
        ("semi-norm quadrature oracle", c3_seminorm_oracle),
        ("2-isometry", c4_two_isometry),
        ("left-inverse commuting", c5_left_inverse_commuting),
        ("doubly commuting on D²(μ)", c6_doubly_commuting),
        ("contrast witness", c7_contrast),
        ("wandering subspace", c8_wandering),
        ("multishift equivalence", c9_multishift),
        ("model round-trip", c10_model_roundtrip),
        ("dilation/slice/parallelogram/expansivity", c11_property_suites),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        failed += !v.pass as usize;
        println!("criterion {:>2} {:<42} {}  {}", k + 1, name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
