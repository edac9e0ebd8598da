//! Operator-weighted multishifts on the truncated lattice `{0..=N}^n`.
//!
//! `(T_j x)_{α+ε_j} = A^{(j)}_α x_α`; blocks pushed past the truncation are
//! dropped. Adjoints are taken in the `ℓ²` direct sum of the fibers.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::complement_of_range;
use crate::scalar::{cplx, creal, czero, from_usize, lit, Real};

/// Smallest singular value accepted for a weight.
pub const MIN_SINGULAR_VALUE: f64 = 1e-8;
/// Relative rank threshold for kernels and spans.
pub const RANK_TOL: f64 = 1e-10;

/// Truncated operator-weighted multishift.
#[derive(Clone, Debug, PartialEq)]
pub struct MultishiftSpec<T: Real = f64> {
    n: usize,
    big_n: usize,
    fiber_dim: usize,
    /// `weights[j - 1][site]` is `A^{(j)}_α`.
    weights: Vec<Vec<DMatrix<Complex<T>>>>,
    inverses: Vec<Vec<DMatrix<Complex<T>>>>,
}

/// Vector in `⊕_α H_α` over the truncated lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeVector<T: Real = f64> {
    fiber_dim: usize,
    data: DVector<Complex<T>>,
}

impl<T: Real> LatticeVector<T> {
    pub fn zeros<S: Real>(spec: &MultishiftSpec<S>) -> Self {
        Self { fiber_dim: spec.fiber_dim, data: DVector::from_element(spec.dim(), czero()) }
    }

    /// `e_k ⊗ δ_α`.
    pub fn basis(spec: &MultishiftSpec<T>, alpha: &[usize], k: usize) -> Self {
        let mut v = Self::zeros(spec);
        v.data[spec.site(alpha) * spec.fiber_dim + k] = creal(T::one());
        v
    }

    pub fn from_data(fiber_dim: usize, data: DVector<Complex<T>>) -> Self {
        Self { fiber_dim, data }
    }

    pub fn data(&self) -> &DVector<Complex<T>> {
        &self.data
    }

    pub fn block(&self, site: usize) -> DVector<Complex<T>> {
        self.data.rows(site * self.fiber_dim, self.fiber_dim).into_owned()
    }

    fn set_block(&mut self, site: usize, v: &DVector<Complex<T>>) {
        self.data.rows_mut(site * self.fiber_dim, self.fiber_dim).copy_from(v);
    }

    pub fn norm(&self) -> T {
        self.data.norm()
    }
}

fn min_singular<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    m.clone().singular_values().iter().copied().fold(lit(f64::INFINITY), |a, b| a.min(b))
}

impl<T: Real> MultishiftSpec<T> {
    /// Builds a spec from `weights[j-1][site]`; every weight must be
    /// invertible with smallest singular value at least 1e-8.
    pub fn new(
        n: usize,
        big_n: usize,
        fiber_dim: usize,
        weights: Vec<Vec<DMatrix<Complex<T>>>>,
    ) -> Result<Self> {
        let sites = (big_n + 1).pow(n as u32);
        if weights.len() != n || weights.iter().any(|w| w.len() != sites) {
            return Err(Error::Domain(format!("expected {n} weight families of {sites} sites")));
        }
        let mut inverses = Vec::with_capacity(n);
        for (j, fam) in weights.iter().enumerate() {
            let mut inv = Vec::with_capacity(sites);
            for (s, a) in fam.iter().enumerate() {
                if a.shape() != (fiber_dim, fiber_dim) {
                    return Err(Error::Domain(format!("weight ({}, site {s}) has wrong shape", j + 1)));
                }
                let smin = min_singular(a);
                let bad = || {
                    Error::SingularWeight(format!(
                        "A^({})_{:?} has smallest singular value {:e}",
                        j + 1,
                        site_alpha(s, n, big_n),
                        crate::scalar::to_f64(smin)
                    ))
                };
                if !(smin >= lit(MIN_SINGULAR_VALUE)) {
                    return Err(bad());
                }
                inv.push(a.clone().try_inverse().ok_or_else(bad)?);
            }
            inverses.push(inv);
        }
        Ok(Self { n, big_n, fiber_dim, weights, inverses })
    }

    /// Weights given by a function of `(j, α)`, `j` 1-based.
    pub fn from_fn(
        n: usize,
        big_n: usize,
        fiber_dim: usize,
        f: impl Fn(usize, &[usize]) -> DMatrix<Complex<T>>,
    ) -> Result<Self> {
        let sites = (big_n + 1).pow(n as u32);
        let weights = (1..=n)
            .map(|j| (0..sites).map(|s| f(j, &site_alpha(s, n, big_n))).collect())
            .collect();
        Self::new(n, big_n, fiber_dim, weights)
    }

    /// All weights the identity: the Hardy multishift.
    pub fn identity(n: usize, big_n: usize, fiber_dim: usize) -> Self {
        Self::from_fn(n, big_n, fiber_dim, |_, _| DMatrix::identity(fiber_dim, fiber_dim))
            .expect("identity weights are invertible")
    }

    /// Scalar weights `√((|α|+2)/(|α|+1))` in every direction.
    pub fn dirichlet_like(n: usize, big_n: usize) -> Self {
        Self::from_fn(n, big_n, 1, |_, a| {
            let s = from_usize::<T>(a.iter().sum::<usize>());
            DMatrix::from_element(1, 1, creal(((s + lit(2.0)) / (s + T::one())).sqrt()))
        })
        .expect("positive scalar weights are invertible")
    }

    /// Scalar weights `√((α_j+2)/(α_j+1))` depending only on the own coordinate.
    pub fn separated(n: usize, big_n: usize) -> Self {
        Self::from_fn(n, big_n, 1, |j, a| {
            let s = from_usize::<T>(a[j - 1]);
            DMatrix::from_element(1, 1, creal(((s + lit(2.0)) / (s + T::one())).sqrt()))
        })
        .expect("positive scalar weights are invertible")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Lattice truncation `N`.
    pub fn truncation(&self) -> usize {
        self.big_n
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn num_sites(&self) -> usize {
        (self.big_n + 1).pow(self.n as u32)
    }

    pub fn dim(&self) -> usize {
        self.num_sites() * self.fiber_dim
    }

    /// Site index of `α`, first coordinate most significant.
    pub fn site(&self, alpha: &[usize]) -> usize {
        debug_assert_eq!(alpha.len(), self.n);
        alpha.iter().fold(0, |s, &a| s * (self.big_n + 1) + a)
    }

    pub fn alpha(&self, site: usize) -> Vec<usize> {
        site_alpha(site, self.n, self.big_n)
    }

    /// `A^{(j)}_α`, `j` 1-based.
    pub fn weight(&self, j: usize, alpha: &[usize]) -> &DMatrix<Complex<T>> {
        &self.weights[j - 1][self.site(alpha)]
    }

    pub fn set_weight(&mut self, j: usize, alpha: &[usize], a: DMatrix<Complex<T>>) -> Result<()> {
        let s = self.site(alpha);
        let inv = a.clone().try_inverse().filter(|_| min_singular(&a) >= lit(MIN_SINGULAR_VALUE));
        let inv = inv.ok_or_else(|| Error::SingularWeight(format!("A^({j})_{alpha:?}")))?;
        self.weights[j - 1][s] = a;
        self.inverses[j - 1][s] = inv;
        Ok(())
    }

    /// Copy with `A^{(j)}_α` multiplied by `factor`.
    pub fn perturbed(&self, j: usize, alpha: &[usize], factor: Complex<T>) -> Result<Self> {
        let mut out = self.clone();
        let a = self.weight(j, alpha) * factor;
        out.set_weight(j, alpha, a)?;
        Ok(out)
    }

    fn shifted(&self, site: usize, j: usize, up: bool) -> Option<usize> {
        let mut a = self.alpha(site);
        if up {
            if a[j - 1] == self.big_n {
                return None;
            }
            a[j - 1] += 1;
        } else {
            if a[j - 1] == 0 {
                return None;
            }
            a[j - 1] -= 1;
        }
        Some(self.site(&a))
    }

    /// Dense matrix of `T_j`.
    pub fn t_matrix(&self, j: usize) -> DMatrix<Complex<T>> {
        let f = self.fiber_dim;
        let mut m = DMatrix::from_element(self.dim(), self.dim(), czero());
        for s in 0..self.num_sites() {
            if let Some(t) = self.shifted(s, j, true) {
                m.view_mut((t * f, s * f), (f, f)).copy_from(&self.weights[j - 1][s]);
            }
        }
        m
    }

    /// Dense matrix of `T_j^*` (block transpose-conjugate of `T_j`).
    pub fn t_adjoint_matrix(&self, j: usize) -> DMatrix<Complex<T>> {
        self.t_matrix(j).adjoint()
    }

    /// Dense matrix of `L_j`: `(L_j x)_α = A^{(j)-1}_α x_{α+ε_j}`.
    pub fn l_matrix(&self, j: usize) -> DMatrix<Complex<T>> {
        let f = self.fiber_dim;
        let mut m = DMatrix::from_element(self.dim(), self.dim(), czero());
        for s in 0..self.num_sites() {
            if let Some(t) = self.shifted(s, j, true) {
                m.view_mut((s * f, t * f), (f, f)).copy_from(&self.inverses[j - 1][s]);
            }
        }
        m
    }

    /// Sites with `α_k ≤ N - 1` for every `k` in `dirs`.
    fn sites_below(&self, dirs: &[usize]) -> Vec<usize> {
        (0..self.num_sites())
            .filter(|&s| {
                let a = self.alpha(s);
                dirs.iter().all(|&k| a[k - 1] < self.big_n)
            })
            .collect()
    }
}

fn site_alpha(mut site: usize, n: usize, big_n: usize) -> Vec<usize> {
    let mut a = vec![0; n];
    for k in (0..n).rev() {
        a[k] = site % (big_n + 1);
        site /= big_n + 1;
    }
    a
}

fn frobenius<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    m.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

/// `T_j x` and whether any nonzero block was pushed past the truncation.
pub fn apply_t<T: Real>(spec: &MultishiftSpec<T>, j: usize, x: &LatticeVector<T>) -> (LatticeVector<T>, bool) {
    let mut out = LatticeVector::zeros(spec);
    let mut spilled = false;
    for s in 0..spec.num_sites() {
        let b = x.block(s);
        match spec.shifted(s, j, true) {
            Some(t) => out.set_block(t, &(&spec.weights[j - 1][s] * b)),
            None => spilled |= b.iter().any(|z| *z != czero()),
        }
    }
    (out, spilled)
}

/// `L_j x`, the block-wise inverse-weight down-shift.
pub fn apply_l<T: Real>(spec: &MultishiftSpec<T>, j: usize, x: &LatticeVector<T>) -> Result<LatticeVector<T>> {
    let mut out = LatticeVector::zeros(spec);
    for s in 0..spec.num_sites() {
        if let Some(t) = spec.shifted(s, j, true) {
            out.set_block(s, &(&spec.inverses[j - 1][s] * x.block(t)));
        }
    }
    Ok(out)
}

/// `T_j^* x`.
pub fn apply_t_adjoint<T: Real>(spec: &MultishiftSpec<T>, j: usize, x: &LatticeVector<T>) -> LatticeVector<T> {
    let mut out = LatticeVector::zeros(spec);
    for s in 0..spec.num_sites() {
        if let Some(t) = spec.shifted(s, j, true) {
            out.set_block(s, &(spec.weights[j - 1][s].adjoint() * x.block(t)));
        }
    }
    out
}

/// Max over `i < j` and `α` with `α_i, α_j ≤ N-1` of
/// `‖A^{(j)}_{α+ε_i} A^{(i)}_α - A^{(i)}_{α+ε_j} A^{(j)}_α‖_F`.
pub fn is_commuting<T: Real>(spec: &MultishiftSpec<T>) -> T {
    let mut worst = T::zero();
    for i in 1..=spec.n {
        for j in i + 1..=spec.n {
            for s in spec.sites_below(&[i, j]) {
                let si = spec.shifted(s, i, true).expect("interior site");
                let sj = spec.shifted(s, j, true).expect("interior site");
                let lhs = &spec.weights[j - 1][si] * &spec.weights[i - 1][s];
                let rhs = &spec.weights[i - 1][sj] * &spec.weights[j - 1][s];
                worst = worst.max(frobenius(&(lhs - rhs)));
            }
        }
    }
    worst
}

/// Max over `i ≠ j` and `α` with `α_i, α_j ≤ N-1` of the Frobenius residual of
/// `A^{(i)}_{α+ε_j}(A^{(j)}_α A^{(j)*}_α)A^{(i)-1}_{α+ε_j} = A^{(j)}_{α+ε_i}A^{(j)*}_{α+ε_i}`.
pub fn is_doubly_commuting<T: Real>(spec: &MultishiftSpec<T>) -> Result<T> {
    let mut worst = T::zero();
    for i in 1..=spec.n {
        for j in 1..=spec.n {
            if i == j {
                continue;
            }
            for s in spec.sites_below(&[i, j]) {
                let si = spec.shifted(s, i, true).expect("interior site");
                let sj = spec.shifted(s, j, true).expect("interior site");
                let aj = &spec.weights[j - 1][s];
                let lhs = &spec.weights[i - 1][sj] * (aj * aj.adjoint()) * &spec.inverses[i - 1][sj];
                let b = &spec.weights[j - 1][si];
                let rhs = b * b.adjoint();
                worst = worst.max(frobenius(&(lhs - rhs)));
            }
        }
    }
    Ok(worst)
}

/// Max over `i ≠ j` of `‖(L_i T_j - T_j L_i) e‖` for basis vectors `e` at
/// sites `β` with `β_j ≤ N-1`, where `T_j` does not spill.
pub fn is_left_inverse_commuting<T: Real>(spec: &MultishiftSpec<T>) -> Result<T> {
    let f = spec.fiber_dim;
    let mut worst = T::zero();
    for i in 1..=spec.n {
        let li = spec.l_matrix(i);
        for j in 1..=spec.n {
            if i == j {
                continue;
            }
            let tj = spec.t_matrix(j);
            let diff = &li * &tj - &tj * &li;
            for s in spec.sites_below(&[j]) {
                for k in 0..f {
                    worst = worst.max(diff.column(s * f + k).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Orthonormal basis of `⋂_i ker T_i^*`.
pub fn joint_kernel<T: Real>(spec: &MultishiftSpec<T>) -> DMatrix<Complex<T>> {
    let d = spec.dim();
    let mut stacked = DMatrix::from_element(d, d * spec.n, czero());
    for j in 1..=spec.n {
        stacked.columns_mut((j - 1) * d, d).copy_from(&spec.t_matrix(j));
    }
    // ker [T_1^*; …; T_n^*] = range([T_1 … T_n])^⊥
    complement_of_range(&stacked, lit(RANK_TOL))
}

/// Builds `span{T^α w : α ∈ lattice, w ∈ ⋂ ker T_i^*}` and returns the largest
/// relative projection residual of a basis vector at an interior site
/// (`|α|_∞ ≤ N-1`).
pub fn wandering_reconstruction<T: Real>(spec: &MultishiftSpec<T>) -> Result<T> {
    let w = joint_kernel(spec);
    if w.ncols() == 0 {
        return Err(Error::Rank { expected: spec.fiber_dim, found: 0 });
    }
    let tm: Vec<_> = (1..=spec.n).map(|j| spec.t_matrix(j)).collect();
    let mut gens: Vec<DVector<Complex<T>>> = Vec::new();
    for s in 0..spec.num_sites() {
        let alpha = spec.alpha(s);
        for c in 0..w.ncols() {
            let mut v: DVector<Complex<T>> = w.column(c).into_owned();
            for (j, &times) in alpha.iter().enumerate() {
                for _ in 0..times {
                    v = &tm[j] * v;
                }
            }
            gens.push(v);
        }
    }
    let span = DMatrix::from_columns(&gens);
    let svd = span.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(T::zero(), |a, b| a.max(b));
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > lit::<T>(RANK_TOL) * smax)
        .collect();
    let q = DMatrix::from_fn(spec.dim(), keep.len(), |i, j| u[(i, keep[j])]);
    let f = spec.fiber_dim;
    let all: Vec<usize> = (1..=spec.n).collect();
    let mut worst = T::zero();
    for s in spec.sites_below(&all) {
        for k in 0..f {
            let mut e = DVector::from_element(spec.dim(), czero());
            e[s * f + k] = creal(T::one());
            let r = &e - &q * (q.adjoint() * &e);
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// Witness that `ker T_i^*` reduces `T_j`: the largest of
/// `‖T_i^* T_j v‖` and `‖T_i^* T_j^* v‖` over an orthonormal basis `v` of
/// `ker T_i^*`, counting only interior sites.
pub fn reducing_witness<T: Real>(spec: &MultishiftSpec<T>, i: usize, j: usize) -> T {
    let ti_star = spec.t_adjoint_matrix(i);
    let kernel = complement_of_range(&spec.t_matrix(i), lit(RANK_TOL));
    let tj = spec.t_matrix(j);
    let tj_star = tj.adjoint();
    let f = spec.fiber_dim;
    let all: Vec<usize> = (1..=spec.n).collect();
    let interior = spec.sites_below(&all);
    let mut worst = T::zero();
    for v in kernel.column_iter() {
        for r in [&ti_star * (&tj * v), &ti_star * (&tj_star * v)] {
            for &s in &interior {
                worst = worst.max(r.rows(s * f, f).norm());
            }
        }
    }
    worst
}

/// Kinds of generated examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    /// Coordinate-separated weights: doubly commuting.
    Doubly,
    /// `|α|`-dependent weights: left-inverse commuting, not doubly commuting.
    LicNotDoubly,
}

/// Attempts before [`generate_example`] gives up.
pub const GENERATION_ATTEMPTS: usize = 8;

fn random_unitary<T: Real>(rng: &mut ChaCha8Rng, k: usize) -> DMatrix<Complex<T>> {
    loop {
        let m = DMatrix::from_fn(k, k, |_, _| {
            cplx(lit::<T>(rng.random_range(-1.0..1.0)), lit::<T>(rng.random_range(-1.0..1.0)))
        });
        if min_singular(&m) > lit(1e-3) {
            let qr = m.qr();
            return qr.q();
        }
    }
}

/// Example multishift with scalar profile lifted to the fibers by a seeded
/// random unitary (`A = w(α)·U`; `U = 1` for one-dimensional fibers).
pub fn generate_example<T: Real>(
    kind: ExampleKind,
    n: usize,
    big_n: usize,
    fiber_dim: usize,
    seed: u64,
) -> Result<MultishiftSpec<T>> {
    if n < 2 || big_n < 1 || fiber_dim < 1 {
        return Err(Error::Domain("examples need n ≥ 2, N ≥ 1 and fiber_dim ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_ATTEMPTS {
        let u: DMatrix<Complex<T>> = if fiber_dim == 1 {
            DMatrix::identity(1, 1)
        } else {
            random_unitary(&mut rng, fiber_dim)
        };
        let profile = |j: usize, a: &[usize]| -> T {
            let s = match kind {
                ExampleKind::Doubly => from_usize::<T>(a[j - 1]),
                ExampleKind::LicNotDoubly => from_usize::<T>(a.iter().sum()),
            };
            ((s + lit(2.0)) / (s + T::one())).sqrt()
        };
        let spec = MultishiftSpec::from_fn(n, big_n, fiber_dim, |j, a| &u * creal(profile(j, a)))?;
        let commuting = is_commuting(&spec) <= lit(1e-12);
        let lic = is_left_inverse_commuting(&spec)? <= lit(1e-12);
        let dc = is_doubly_commuting(&spec)?;
        let ok = match kind {
            ExampleKind::Doubly => commuting && dc <= lit(1e-12),
            ExampleKind::LicNotDoubly => commuting && lic && dc >= lit(1e-2),
        };
        if ok {
            return Ok(spec);
        }
    }
    Err(Error::Generation(format!("no {kind:?} example after {GENERATION_ATTEMPTS} attempts")))
}

/// Random commuting multishift: `A^{(j)}_α = B_{α+ε_j} B_α⁻¹` with `B_α`
/// having singular values in `[1/√2, √2]`, so every weight has singular
/// values in `[1/2, 2]`.
pub fn random_commuting<T: Real, R: Rng + ?Sized>(
    n: usize,
    big_n: usize,
    fiber_dim: usize,
    rng: &mut R,
) -> MultishiftSpec<T> {
    let ext = big_n + 1;
    let ext_sites = (ext + 1).pow(n as u32);
    let mut chacha = ChaCha8Rng::seed_from_u64(rng.random());
    let potential: Vec<DMatrix<Complex<T>>> = (0..ext_sites)
        .map(|_| {
            let u = random_unitary::<T>(&mut chacha, fiber_dim);
            let v = random_unitary::<T>(&mut chacha, fiber_dim);
            let s = DMatrix::from_fn(fiber_dim, fiber_dim, |a, b| {
                if a == b {
                    creal(lit::<T>(chacha.random_range(0.5f64.sqrt()..2.0f64.sqrt())))
                } else {
                    czero()
                }
            });
            u * s * v
        })
        .collect();
    let ext_site = |a: &[usize]| a.iter().fold(0, |s, &x| s * (ext + 1) + x);
    MultishiftSpec::from_fn(n, big_n, fiber_dim, |j, a| {
        let mut up = a.to_vec();
        up[j - 1] += 1;
        let b_up = &potential[ext_site(&up)];
        let b_inv = potential[ext_site(a)].clone().try_inverse().expect("potential is invertible");
        b_up * b_inv
    })
    .expect("potential weights are invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_shift_moves_basis_vector() {
        let spec = MultishiftSpec::<f64>::identity(2, 3, 2);
        let x = LatticeVector::basis(&spec, &[0, 0], 1);
        let (y, spill) = apply_t(&spec, 1, &x);
        assert!(!spill);
        assert_eq!(y, LatticeVector::basis(&spec, &[1, 0], 1));
        let (z, _) = apply_t(&spec, 1, &LatticeVector::zeros(&spec));
        assert_eq!(z.norm(), 0.0);
        let (_, spill) = apply_t(&spec, 2, &LatticeVector::basis(&spec, &[1, 3], 0));
        assert!(spill);
    }

    #[test]
    fn dirichlet_like_shift_and_inverse() {
        let spec = MultishiftSpec::<f64>::dirichlet_like(2, 4);
        let (y, _) = apply_t(&spec, 1, &LatticeVector::basis(&spec, &[0, 0], 0));
        assert_relative_eq!(y.block(spec.site(&[1, 0]))[0].re, 2f64.sqrt(), epsilon = 1e-15);
        let l = apply_l(&spec, 1, &LatticeVector::basis(&spec, &[1, 0], 0)).unwrap();
        assert_relative_eq!(l.block(0)[0].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn identity_left_inverse_is_down_shift() {
        let spec = MultishiftSpec::<f64>::identity(2, 3, 1);
        let l = apply_l(&spec, 2, &LatticeVector::basis(&spec, &[2, 1], 0)).unwrap();
        assert_eq!(l, LatticeVector::basis(&spec, &[2, 0], 0));
        assert_eq!(apply_l(&spec, 2, &LatticeVector::basis(&spec, &[2, 0], 0)).unwrap().norm(), 0.0);
    }

    #[test]
    fn left_inverse_undoes_shift_on_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = random_commuting::<f64, _>(2, 3, 2, &mut rng);
        let lt = spec.l_matrix(1) * spec.t_matrix(1);
        for s in spec.sites_below(&[1]) {
            for k in 0..2 {
                let mut e = DVector::from_element(spec.dim(), czero());
                e[s * 2 + k] = creal(1.0);
                assert!((&lt * &e - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_matches_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = random_commuting::<f64, _>(2, 2, 2, &mut rng);
        let x = LatticeVector::from_data(2, DVector::from_fn(spec.dim(), |i, _| cplx(i as f64 * 0.1, 1.0 - i as f64 * 0.05)));
        let a = apply_t_adjoint(&spec, 2, &x);
        let b = spec.t_adjoint_matrix(2) * x.data();
        assert!((a.data() - b).norm() < 1e-14);
    }

    #[test]
    fn commuting_examples() {
        assert_eq!(is_commuting(&MultishiftSpec::<f64>::identity(2, 3, 2)), 0.0);
        let d = MultishiftSpec::<f64>::dirichlet_like(2, 4);
        assert!(is_commuting(&d) <= 1e-15);
        let p = d.perturbed(1, &[0, 1], creal(2.0)).unwrap();
        assert!(is_commuting(&p) > 0.1);
    }

    #[test]
    fn doubly_commuting_examples() {
        assert_eq!(is_doubly_commuting(&MultishiftSpec::<f64>::identity(2, 3, 1)).unwrap(), 0.0);
        let d = MultishiftSpec::<f64>::dirichlet_like(2, 4);
        // |w(0)|² - |w(ε)|² = 2 - 3/2
        assert_relative_eq!(is_doubly_commuting(&d).unwrap(), 0.5, epsilon = 1e-14);
        assert!(is_doubly_commuting(&MultishiftSpec::<f64>::separated(2, 4)).unwrap() <= 1e-15);
    }

    #[test]
    fn left_inverse_commuting_examples() {
        assert_eq!(is_left_inverse_commuting(&MultishiftSpec::<f64>::identity(2, 3, 1)).unwrap(), 0.0);
        let d = MultishiftSpec::<f64>::dirichlet_like(2, 4);
        assert!(is_left_inverse_commuting(&d).unwrap() <= 1e-12);
        let p = d.perturbed(1, &[0, 1], creal(2.0)).unwrap();
        assert!(is_left_inverse_commuting(&p).unwrap() > 1e-3);
    }

    #[test]
    fn joint_kernel_is_origin_fiber() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = random_commuting::<f64, _>(2, 3, 2, &mut rng);
        let k = joint_kernel(&spec);
        assert_eq!(k.ncols(), 2);
        for c in k.column_iter() {
            assert!((c.rows(0, 2).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wandering_examples() {
        assert!(wandering_reconstruction(&MultishiftSpec::<f64>::identity(2, 4, 1)).unwrap() <= 1e-14);
        assert!(wandering_reconstruction(&MultishiftSpec::<f64>::dirichlet_like(2, 5)).unwrap() <= 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = random_commuting::<f64, _>(2, 3, 2, &mut rng);
        assert!(wandering_reconstruction(&spec).unwrap() <= 1e-10);
    }

    #[test]
    fn reducing_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = random_commuting::<f64, _>(2, 3, 2, &mut rng);
        assert!(reducing_witness(&spec, 1, 2) <= 1e-8);
        assert!(reducing_witness(&MultishiftSpec::<f64>::dirichlet_like(2, 4), 2, 1) <= 1e-8);
    }

    #[test]
    fn generated_examples() {
        let lic = generate_example::<f64>(ExampleKind::LicNotDoubly, 2, 4, 1, 1).unwrap();
        assert_eq!(lic, MultishiftSpec::dirichlet_like(2, 4));
        let dbl = generate_example::<f64>(ExampleKind::Doubly, 2, 4, 1, 1).unwrap();
        assert_eq!(dbl, MultishiftSpec::separated(2, 4));
        for seed in 0..4 {
            let s = generate_example::<f64>(ExampleKind::LicNotDoubly, 2, 3, 2, seed).unwrap();
            assert!(is_commuting(&s) <= 1e-12);
            assert!(is_left_inverse_commuting(&s).unwrap() <= 1e-12);
            assert!(is_doubly_commuting(&s).unwrap() >= 1e-2);
            let t = generate_example::<f64>(ExampleKind::Doubly, 3, 2, 2, seed).unwrap();
            assert!(is_doubly_commuting(&t).unwrap() <= 1e-12);
        }
        let a = generate_example::<f64>(ExampleKind::Doubly, 2, 3, 3, 42).unwrap();
        let b = generate_example::<f64>(ExampleKind::Doubly, 2, 3, 3, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn singular_weight_rejected() {
        let r = MultishiftSpec::<f64>::from_fn(2, 1, 1, |_, a| {
            DMatrix::from_element(1, 1, creal(if a == [1, 1] { 0.0 } else { 1.0 }))
        });
        assert!(matches!(r, Err(Error::SingularWeight(_))));
    }

    #[test]
    fn random_weights_are_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = random_commuting::<f64, _>(2, 2, 3, &mut rng);
        for j in 1..=2 {
            for s in 0..spec.num_sites() {
                let sv = spec.weights[j - 1][s].clone().singular_values();
                assert!(sv.iter().all(|&x| (0.5 - 1e-12..=2.0 + 1e-12).contains(&x)));
            }
        }
    }
}
