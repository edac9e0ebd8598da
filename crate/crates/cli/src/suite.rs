//! The `verify` identity suite.

use std::f64::consts::TAU;

use dirichlet_bidisc::dirichlet1d::{mnu_matrix, shimorin_residual};
use dirichlet_bidisc::dirichlet2d::{
    gram_2d, seminorm_quadrature, seminorm_series, tail_energy_sum, BiPoly, Slice, Which,
    DEFAULT_ANGULAR_NODES, DEFAULT_RADIAL_NODES,
};
use dirichlet_bidisc::extraction::{model_roundtrip, MomentTable};
use dirichlet_bidisc::linalg::{hermitian_min_eigenvalue, max_abs};
use dirichlet_bidisc::operators::{
    cauchy_dual_residual, doubly_commuting_residual, left_inverse_commuting_residual, mz,
    reducing_residual, two_isometry_form_residual, wandering_reconstruction_residual,
    wandering_subspace, GramSpace,
};
use dirichlet_bidisc::{Complex, Error, ProductMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{num, CliError};

pub const ORACLE_TOL: f64 = 1e-6;

pub struct Config<'a> {
    pub measure_id: &'a str,
    pub degrees: (usize, usize),
    pub radii: &'a [f64],
    pub oracle_tol: f64,
    pub seed: u64,
    pub margin: Option<usize>,
    pub samples: usize,
}

pub struct Record {
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl Record {
    fn new(identity: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { identity: identity.into(), residual, tolerance }
    }

    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }

    pub fn to_json(&self, cfg: &Config) -> Value {
        json!({
            "identity": self.identity,
            "measure_id": cfg.measure_id,
            "degrees": [cfg.degrees.0, cfg.degrees.1],
            "residual": num(self.residual),
            "tolerance": num(self.tolerance),
            "pass": self.pass(),
        })
    }
}

fn random_poly(rng: &mut ChaCha8Rng, d1: usize, d2: usize) -> BiPoly<f64> {
    BiPoly::from_matrix(nalgebra::DMatrix::from_fn(d1 + 1, d2 + 1, |_, _| {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }))
}

/// Runs every identity that applies at the configured degrees.
pub fn run(mu: &ProductMeasure<f64>, cfg: &Config) -> Result<Vec<Record>, CliError> {
    let (d1, d2) = cfg.degrees;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    for (k, nu) in [&mu.mu1, &mu.mu2].into_iter().enumerate() {
        let d = cfg.degrees.0.max(cfg.degrees.1).max(2);
        let r = shimorin_residual(&mnu_matrix(nu, d + 1));
        out.push(Record::new(format!("shimorin_{}", k + 1), r, 1e-12 * (1.0 + nu.total_mass())));
    }

    let g = gram_2d(mu, d1, d2)?;
    let dense = g.dense();
    let kron = g.factor1().matrix().kronecker(g.factor2().matrix());
    let kr = dense.iter().zip(kron.iter()).fold(0.0f64, |a, (x, y)| a.max((x - y).norm() / y.norm().max(1.0)));
    out.push(Record::new("gram_kronecker", kr, 1e-14));

    let big = gram_2d(mu, d1 + 2, d2 + 2)?.dense();
    let scale = max_abs(&big).max(1.0);
    for i in [1, 2] {
        let r = two_isometry_form_residual(mu, i, d1, d2)? / scale;
        out.push(Record::new(format!("two_isometry_{i}"), r, 1e-10));
        let s = mz::<f64>(i, d1, d2);
        let (e1, e2) = s.codomain();
        let form = s.matrix().adjoint() * mu.inner_matrix(e1, e2)? * s.matrix() - mu.inner_matrix(d1, d2)?;
        let lam = hermitian_min_eigenvalue(&form);
        out.push(Record::new(format!("expansivity_{i}"), (-lam).max(0.0) / scale, 1e-12));
    }

    out.push(Record::new("left_inverse_commuting", left_inverse_commuting_residual::<f64>(d1, d2), 0.0));

    let d = d1.min(d2);
    let margin = cfg.margin.unwrap_or_else(|| mu.adjoint_margin(d));
    if d >= 2 {
        out.push(Record::new("doubly_commuting", doubly_commuting_residual(mu, d, margin)?, 1e-8));
        out.push(Record::new("reducing_subspace", reducing_residual(mu, d, margin)?, 1e-8));
        for i in [1, 2] {
            out.push(Record::new(format!("cauchy_dual_{i}"), cauchy_dual_residual(i, mu, d1, d2, margin)?, 1e-8));
        }
    }

    if d1 >= 1 && d2 >= 1 {
        let dim = match wandering_subspace(mu, d1, d2) {
            Ok(w) => w.len(),
            Err(Error::Rank { found, .. }) => found,
            Err(e) => return Err(e.into()),
        };
        out.push(Record::new("wandering_dimension", (dim as f64 - 1.0).abs(), 0.0));
        if dim == 1 {
            out.push(Record::new("wandering_reconstruction", wandering_reconstruction_residual(mu, d1, d2)?, 1e-10));
        }
    }

    let (p1, p2) = (d1.min(6), d2.min(6));
    let mut oracle = 0.0f64;
    let mut tails = 0.0f64;
    for _ in 0..cfg.samples {
        let f = random_poly(&mut rng, p1, p2);
        for which in Which::ALL {
            for &r in cfg.radii {
                let s = seminorm_series(mu, &f, which, r)?;
                let q = seminorm_quadrature(mu, &f, which, r, DEFAULT_RADIAL_NODES, DEFAULT_ANGULAR_NODES)?;
                oracle = oracle.max((s - q).abs() / (1.0 + s));
            }
        }
    }
    out.push(Record::new("seminorm_oracle", oracle, cfg.oracle_tol));
    for _ in 0..cfg.samples.min(5) {
        let f = random_poly(&mut rng, d1.min(4), d2.min(4));
        for which in Which::ALL {
            for &r in cfg.radii.iter().filter(|&&r| r < 1.0) {
                let s = seminorm_series(mu, &f, which, r)?;
                let t = tail_energy_sum(mu, &f, which, r, tail_nodes(r, p1.max(p2)))?;
                tails = tails.max((s - t).abs() / (1.0 + s));
            }
        }
    }
    if cfg.radii.iter().any(|&r| r < 1.0) {
        out.push(Record::new("tail_identity", tails, 1e-10));
    }

    let mut dilation = 0.0f64;
    let mut slice = 0.0f64;
    let mut parallelogram = 0.0f64;
    for _ in 0..cfg.samples {
        let f = random_poly(&mut rng, d1, d2);
        let h = random_poly(&mut rng, d1, d2);
        for which in Which::ALL {
            let full = seminorm_series(mu, &f, which, 1.0)?;
            for r in [0.3, 0.7, 0.95] {
                let v = seminorm_series(mu, &f.dilate(r)?, which, 1.0)?;
                dilation = dilation.max((v - full) / (1.0 + full));
            }
            for s in [Slice::Z1Zero, Slice::Z2Zero] {
                let v = seminorm_series(mu, &f.slice(s), which, 1.0)?;
                slice = slice.max((v - full) / (1.0 + full));
            }
        }
        let (nf, nh) = (g.norm_sq(&f)?, g.norm_sq(&h)?);
        let lhs = g.norm_sq(&f.add(&h))? + g.norm_sq(&f.sub(&h))?;
        parallelogram = parallelogram.max((lhs - 2.0 * (nf + nh)).abs() / (1.0 + nf + nh));
    }
    out.push(Record::new("dilation_contraction", dilation.max(0.0), 1e-12));
    out.push(Record::new("slice_inequality", slice.max(0.0), 1e-12));
    out.push(Record::new("parallelogram", parallelogram, 1e-10));

    let mut kernel = 0.0f64;
    let (k1, k2) = (d1.min(6), d2.min(6));
    for _ in 0..cfg.samples.min(5) {
        let w1 = Complex::from_polar(rng.random_range(0.0..0.9), rng.random_range(0.0..TAU));
        let w2 = Complex::from_polar(rng.random_range(0.0..0.9), rng.random_range(0.0..TAU));
        let kw = g.kernel_vector(w1, w2);
        for m in 0..=k1 {
            for n in 0..=k2 {
                let f = BiPoly::monomial(m, n);
                kernel = kernel.max((g.inner(&f, &kw)? - f.eval(w1, w2)).norm());
            }
        }
    }
    out.push(Record::new("kernel_reproducing", kernel, 1e-8));

    if d1 >= 2 && d2 >= 2 {
        let r = model_roundtrip(&MomentTable::from_gram(&g))?;
        out.push(Record::new("model_roundtrip", r.roundtrip_dev, 1e-8));
    }
    Ok(out)
}

/// Trapezoid nodes for the tail sums: the Poisson kernel aliases at order r^n.
fn tail_nodes(r: f64, deg: usize) -> usize {
    let alias = (f64::EPSILON.ln() / r.ln()).ceil() as usize;
    (alias + 2 * deg + 2).clamp(128, 8192)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(degrees: (usize, usize)) -> Config<'static> {
        Config { measure_id: "t", degrees, radii: &[0.5, 0.9], oracle_tol: ORACLE_TOL, seed: 1, margin: None, samples: 3 }
    }

    #[test]
    fn classical_suite_passes() {
        let recs = run(&ProductMeasure::classical(), &cfg((5, 4))).unwrap();
        assert!(recs.iter().all(Record::pass));
        assert!(recs.iter().any(|r| r.identity == "model_roundtrip"));
    }

    #[test]
    fn low_degree_skips_adjoint_checks() {
        let recs = run(&ProductMeasure::classical(), &cfg((1, 1))).unwrap();
        assert!(!recs.iter().any(|r| r.identity == "doubly_commuting"));
    }

    #[test]
    fn tail_nodes_resolve_poisson_aliasing() {
        assert_eq!(tail_nodes(0.5, 6), 128);
        assert!(0.9f64.powi(tail_nodes(0.9, 6) as i32) < 1e-15);
    }
}
