//! Shift operators on truncated polynomial spaces, their Gram adjoints and
//! left inverses, and numerical checks of the 2-isometry, commuting and
//! wandering-subspace identities.
//!
//! Adjoints on a truncation are compressions: rows and columns near the
//! degree cut-off do not agree with the adjoint on the full space, so
//! adjoint-based comparisons are made on a central block.

use nalgebra::{Complex, DMatrix, DVector};

use crate::dirichlet2d::{gram_2d, BiPoly};
use crate::error::{Error, Result};
use crate::linalg::{complement_of_range, gram_complement, max_abs, GuardedCholesky};
use crate::measures::ProductMeasure;
use crate::scalar::{cone, creal, czero, lit, Real};

/// Relative singular-value threshold used for numerical ranks.
pub const RANK_TOL: f64 = 1e-8;

/// Linear map `P_{dom} → P_{cod}` acting on coefficient vectors in basis
/// order `m·(d2+1) + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffOperator<T: Real = f64> {
    dom: (usize, usize),
    cod: (usize, usize),
    matrix: DMatrix<Complex<T>>,
}

fn dim(d: (usize, usize)) -> usize {
    (d.0 + 1) * (d.1 + 1)
}

fn split(i: usize, d: (usize, usize)) -> (usize, usize) {
    (i / (d.1 + 1), i % (d.1 + 1))
}

impl<T: Real> CoeffOperator<T> {
    pub fn new(dom: (usize, usize), cod: (usize, usize), matrix: DMatrix<Complex<T>>) -> Self {
        assert_eq!(matrix.shape(), (dim(cod), dim(dom)), "matrix shape does not match degrees");
        Self { dom, cod, matrix }
    }

    pub fn identity(d1: usize, d2: usize) -> Self {
        Self::new((d1, d2), (d1, d2), DMatrix::identity(dim((d1, d2)), dim((d1, d2))))
    }

    /// Operator sending monomial `(m, n)` to `coef · (m + s1, n + s2)` when
    /// the target fits in `cod`.
    fn index_map(
        dom: (usize, usize),
        cod: (usize, usize),
        f: impl Fn(usize, usize) -> Option<(usize, usize)>,
    ) -> Self {
        let mut matrix = DMatrix::from_element(dim(cod), dim(dom), czero());
        for j in 0..dim(dom) {
            let (m, n) = split(j, dom);
            if let Some((p, q)) = f(m, n) {
                if p <= cod.0 && q <= cod.1 {
                    matrix[(p * (cod.1 + 1) + q, j)] = cone();
                }
            }
        }
        Self { dom, cod, matrix }
    }

    pub fn domain(&self) -> (usize, usize) {
        self.dom
    }

    pub fn codomain(&self) -> (usize, usize) {
        self.cod
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn apply(&self, f: &BiPoly<T>) -> Result<BiPoly<T>> {
        let v = f.resized(self.dom.0, self.dom.1)?.to_vector();
        Ok(BiPoly::from_vector(&(&self.matrix * v), self.cod.0, self.cod.1))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(other.cod, self.dom, "composition degree mismatch");
        Self::new(other.dom, self.cod, &self.matrix * &other.matrix)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.dom, self.cod), (other.dom, other.cod), "difference degree mismatch");
        Self::new(self.dom, self.cod, &self.matrix - &other.matrix)
    }

    /// Rows and columns whose monomials have degrees at most `bound`.
    pub fn restricted(&self, bound: (usize, usize)) -> DMatrix<Complex<T>> {
        let rows: Vec<usize> = (0..dim(self.cod))
            .filter(|&i| {
                let (m, n) = split(i, self.cod);
                m <= bound.0 && n <= bound.1
            })
            .collect();
        let cols: Vec<usize> = (0..dim(self.dom))
            .filter(|&j| {
                let (m, n) = split(j, self.dom);
                m <= bound.0 && n <= bound.1
            })
            .collect();
        DMatrix::from_fn(rows.len(), cols.len(), |a, b| self.matrix[(rows[a], cols[b])])
    }

    /// [`Self::restricted`] to degrees `min(dom, cod) - margin` in each variable.
    pub fn central_block(&self, margin: usize) -> DMatrix<Complex<T>> {
        let b1 = self.dom.0.min(self.cod.0);
        let b2 = self.dom.1.min(self.cod.1);
        if margin > b1 || margin > b2 {
            return DMatrix::from_element(0, 0, czero());
        }
        self.restricted((b1 - margin, b2 - margin))
    }
}

/// `M_{z_i}: P_{d1,d2} → P_{d1+1,d2}` (or `P_{d1,d2+1}`).
pub fn mz<T: Real>(i: usize, d1: usize, d2: usize) -> CoeffOperator<T> {
    match i {
        1 => CoeffOperator::index_map((d1, d2), (d1 + 1, d2), |m, n| Some((m + 1, n))),
        2 => CoeffOperator::index_map((d1, d2), (d1, d2 + 1), |m, n| Some((m, n + 1))),
        _ => panic!("variable index must be 1 or 2"),
    }
}

/// `L_i f = (f - f|_{z_i=0}) / z_i` as a down-shift `P_{d1,d2} → P_{d1-1,d2}`
/// (or `P_{d1,d2-1}`); degree zero maps to the zero operator on `P_{0,·}`.
pub fn left_inverse<T: Real>(i: usize, d1: usize, d2: usize) -> CoeffOperator<T> {
    match i {
        1 => CoeffOperator::index_map((d1, d2), (d1.saturating_sub(1), d2), |m, n| {
            (m >= 1).then(|| (m - 1, n))
        }),
        2 => CoeffOperator::index_map((d1, d2), (d1, d2.saturating_sub(1)), |m, n| {
            (n >= 1).then(|| (m, n - 1))
        }),
        _ => panic!("variable index must be 1 or 2"),
    }
}

/// A space of polynomials with a Gram inner product on every `P_{d1,d2}`.
pub trait GramSpace<T: Real> {
    /// Dense `H` with `⟨x, y⟩ = y^H H x` on `P_{d1,d2}`.
    fn inner_matrix(&self, d1: usize, d2: usize) -> Result<DMatrix<Complex<T>>>;

    fn factor(&self, d1: usize, d2: usize) -> Result<GuardedCholesky<T>> {
        GuardedCholesky::new(&self.inner_matrix(d1, d2)?, "Gram matrix")
    }

    fn inner(&self, f: &BiPoly<T>, g: &BiPoly<T>) -> Result<Complex<T>> {
        let (a1, a2) = f.degrees();
        let (b1, b2) = g.degrees();
        let (d1, d2) = (a1.max(b1), a2.max(b2));
        let x = f.resized(d1, d2)?.to_vector();
        let y = g.resized(d1, d2)?.to_vector();
        let h = self.inner_matrix(d1, d2)?;
        Ok((y.adjoint() * h * x)[(0, 0)])
    }

    fn norm_sq(&self, f: &BiPoly<T>) -> Result<T> {
        Ok(self.inner(f, f)?.re)
    }
}

impl<T: Real> GramSpace<T> for ProductMeasure<T> {
    fn inner_matrix(&self, d1: usize, d2: usize) -> Result<DMatrix<Complex<T>>> {
        Ok(gram_2d(self, d1, d2)?.inner_matrix())
    }

    fn factor(&self, d1: usize, d2: usize) -> Result<GuardedCholesky<T>> {
        let g = gram_2d(self, d1, d2)?;
        GuardedCholesky::new(&g.inner_matrix(), "two-variable Gram")
    }

    fn inner(&self, f: &BiPoly<T>, g: &BiPoly<T>) -> Result<Complex<T>> {
        let (a1, a2) = f.degrees();
        let (b1, b2) = g.degrees();
        gram_2d(self, a1.max(b1), a2.max(b2))?.inner(f, g)
    }
}

/// Adjoint of `op` for the Gram inner products of `space` on its domain and
/// codomain: `H_dom⁻¹ Aᴴ H_cod`.
pub fn gram_adjoint<T: Real, S: GramSpace<T> + ?Sized>(
    op: &CoeffOperator<T>,
    space: &S,
) -> Result<CoeffOperator<T>> {
    let h_dom = space.factor(op.dom.0, op.dom.1)?;
    let h_cod = space.inner_matrix(op.cod.0, op.cod.1)?;
    let matrix = h_dom.solve(&(op.matrix.adjoint() * h_cod));
    Ok(CoeffOperator::new(op.cod, op.dom, matrix))
}

/// `(M_{z_i}^* M_{z_i})⁻¹ M_{z_i}^*: P_{d+ε_i} → P_d` from Gram adjoints.
pub fn cauchy_dual_left_inverse<T: Real, S: GramSpace<T> + ?Sized>(
    i: usize,
    space: &S,
    d1: usize,
    d2: usize,
) -> Result<CoeffOperator<T>> {
    let m = mz::<T>(i, d1, d2);
    let (e1, e2) = m.codomain();
    // (M*M)⁻¹M* = (Mᴴ H M)⁻¹ Mᴴ H with H the Gram matrix of the larger space.
    space.factor(d1, d2)?;
    let h = space.inner_matrix(e1, e2)?;
    let mh_h = m.matrix.adjoint() * h;
    let normal = &mh_h * &m.matrix;
    let chol = GuardedCholesky::new(&normal, "M*M")?;
    Ok(CoeffOperator::new((e1, e2), (d1, d2), chol.solve(&mh_h)))
}

/// Max deviation of the Cauchy-dual left inverse from the coefficient
/// down-shift on the central block.
pub fn cauchy_dual_residual<T: Real, S: GramSpace<T> + ?Sized>(
    i: usize,
    space: &S,
    d1: usize,
    d2: usize,
    margin: usize,
) -> Result<T> {
    let cd = cauchy_dual_left_inverse(i, space, d1, d2)?;
    let (e1, e2) = cd.domain();
    let li = left_inverse::<T>(i, e1, e2);
    Ok(max_abs(&cd.sub(&li).central_block(margin)))
}

/// `|‖z_i² f‖² - 2‖z_i f‖² + ‖f‖²|`.
pub fn two_isometry_residual<T: Real, S: GramSpace<T> + ?Sized>(
    space: &S,
    f: &BiPoly<T>,
    i: usize,
) -> Result<T> {
    let zf = f.mul_z(i);
    let zzf = zf.mul_z(i);
    let two: T = lit(2.0);
    Ok((space.norm_sq(&zzf)? - two * space.norm_sq(&zf)? + space.norm_sq(f)?).abs())
}

/// Max entry of the Hermitian form `M_i²ᴴ H M_i² - 2 M_iᴴ H M_i + H` on
/// `P_{d1,d2}`: zero exactly when `M_{z_i}` is a 2-isometry on every
/// polynomial of that bidegree.
pub fn two_isometry_form_residual<T: Real, S: GramSpace<T> + ?Sized>(
    space: &S,
    i: usize,
    d1: usize,
    d2: usize,
) -> Result<T> {
    let s1 = mz::<T>(i, d1, d2);
    let (e1, e2) = s1.codomain();
    let s2 = mz::<T>(i, e1, e2).compose(&s1);
    let (f1, f2) = s2.codomain();
    let h0 = space.inner_matrix(d1, d2)?;
    let h1 = space.inner_matrix(e1, e2)?;
    let h2 = space.inner_matrix(f1, f2)?;
    let two: Complex<T> = creal(lit(2.0));
    let form = s2.matrix.adjoint() * h2 * &s2.matrix - (s1.matrix.adjoint() * h1 * &s1.matrix) * two + h0;
    Ok(max_abs(&form))
}

/// `‖z_i f‖² - ‖f‖²`; non-negative for an expansive shift.
pub fn expansivity_check<T: Real, S: GramSpace<T> + ?Sized>(
    space: &S,
    f: &BiPoly<T>,
    i: usize,
) -> Result<T> {
    Ok(space.norm_sq(&f.mul_z(i))? - space.norm_sq(f)?)
}

/// Max entry of `L₁M_{z₂} - M_{z₂}L₁` and `L₂M_{z₁} - M_{z₁}L₂` on `P_{d1,d2}`.
pub fn left_inverse_commuting_residual<T: Real>(d1: usize, d2: usize) -> T {
    let a = left_inverse::<T>(1, d1, d2 + 1).compose(&mz(2, d1, d2));
    let b = mz::<T>(2, d1.saturating_sub(1), d2).compose(&left_inverse(1, d1, d2));
    let c = left_inverse::<T>(2, d1 + 1, d2).compose(&mz(1, d1, d2));
    let d = mz::<T>(1, d1, d2.saturating_sub(1)).compose(&left_inverse(2, d1, d2));
    max_abs(a.sub(&b).matrix()).max(max_abs(c.sub(&d).matrix()))
}

/// `M_{z₁}^*` on `P_{d1,d2}` as the compression `P_{d1,d2} → P_{d1-1,d2}`.
fn shift_adjoint<T: Real, S: GramSpace<T> + ?Sized>(
    i: usize,
    space: &S,
    d1: usize,
    d2: usize,
) -> Result<CoeffOperator<T>> {
    let op = match i {
        1 => mz::<T>(1, d1 - 1, d2),
        _ => mz::<T>(2, d1, d2 - 1),
    };
    gram_adjoint(&op, space)
}

/// `M_{z₁}^* M_{z₂} - M_{z₂} M_{z₁}^*` as a map `P_{d,d} → P_{d-1,d+1}`.
pub fn shift_commutator<T: Real, S: GramSpace<T> + ?Sized>(space: &S, d: usize) -> Result<CoeffOperator<T>> {
    if d == 0 {
        return Err(Error::Domain("commutator needs degree ≥ 1".into()));
    }
    let lhs = shift_adjoint(1, space, d, d + 1)?.compose(&mz(2, d, d));
    let rhs = mz::<T>(2, d - 1, d).compose(&shift_adjoint(1, space, d, d)?);
    Ok(lhs.sub(&rhs))
}

/// Max entry of `M_{z₁}^* M_{z₂} - M_{z₂} M_{z₁}^*` on `P_{d,d}`, restricted
/// to the central block of degrees `≤ d - margin`.
pub fn doubly_commuting_residual<T: Real, S: GramSpace<T> + ?Sized>(
    space: &S,
    d: usize,
    margin: usize,
) -> Result<T> {
    let diff = shift_commutator(space, d)?;
    if margin > d {
        return Ok(T::zero());
    }
    Ok(max_abs(&diff.restricted((d - margin, d - margin))))
}

/// Max change of the central block of `M_{z_i}^*` when the truncation grows
/// from `d` to `d + 2`. Margins count from `d`; since the adjoint lowers one
/// degree, anything below 1 is treated as 1.
pub fn adjoint_stability<T: Real, S: GramSpace<T> + ?Sized>(
    i: usize,
    space: &S,
    d: usize,
    margin: usize,
) -> Result<T> {
    let margin = margin.max(1);
    if margin > d {
        return Ok(T::zero());
    }
    let (small, large) = adjoint_pair(i, space, d)?;
    let bound = (d - margin, d - margin);
    Ok(max_abs(&(small.restricted(bound) - large.restricted(bound))))
}

fn adjoint_pair<T: Real, S: GramSpace<T> + ?Sized>(
    i: usize,
    space: &S,
    d: usize,
) -> Result<(CoeffOperator<T>, CoeffOperator<T>)> {
    Ok((shift_adjoint(i, space, d, d)?, shift_adjoint(i, space, d + 2, d + 2)?))
}

/// Smallest margin whose central block of `M_{z_i}^*` moves by at most `tol`
/// when the truncation grows from `d` to `d + 2`; `None` if even the
/// constant block moves more.
pub fn stable_margin<T: Real, S: GramSpace<T> + ?Sized>(
    i: usize,
    space: &S,
    d: usize,
    tol: T,
) -> Result<Option<usize>> {
    let (small, large) = adjoint_pair(i, space, d)?;
    for margin in 1..=d {
        let bound = (d - margin, d - margin);
        if max_abs(&(small.restricted(bound) - large.restricted(bound))) <= tol {
            return Ok(Some(margin));
        }
    }
    Ok(None)
}

/// Gram-orthonormal basis of `W = P_{d1,d2} ⊖ (z₁P_{d1-1,d2} + z₂P_{d1,d2-1})`.
///
/// Each basis polynomial is scaled so its constant coefficient is real and
/// positive (or, failing that, its first nonzero coefficient).
pub fn wandering_subspace<T: Real, S: GramSpace<T> + ?Sized>(
    space: &S,
    d1: usize,
    d2: usize,
) -> Result<Vec<BiPoly<T>>> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::Domain("wandering subspace needs d1, d2 ≥ 1".into()));
    }
    let h = space.factor(d1, d2)?;
    let hm = space.inner_matrix(d1, d2)?;
    let m1 = embed(&mz::<T>(1, d1 - 1, d2), (d1, d2));
    let m2 = embed(&mz::<T>(2, d1, d2 - 1), (d1, d2));
    let mut span = DMatrix::from_element(dim((d1, d2)), m1.ncols() + m2.ncols(), czero());
    span.columns_mut(0, m1.ncols()).copy_from(&m1);
    span.columns_mut(m1.ncols(), m2.ncols()).copy_from(&m2);
    let perp = gram_complement(&h, &span, lit(RANK_TOL));
    if perp.ncols() != 1 {
        return Err(Error::Rank { expected: 1, found: perp.ncols() });
    }
    let mut out = Vec::with_capacity(perp.ncols());
    for c in 0..perp.ncols() {
        let mut v: DVector<Complex<T>> = perp.column(c).into_owned();
        let pivot = v.iter().copied().find(|z| z.norm_sqr() > T::zero()).unwrap_or(cone());
        v *= pivot.conj() / pivot.norm_sqr().sqrt();
        let norm = (v.adjoint() * &hm * &v)[(0, 0)].re.sqrt();
        v /= creal(norm);
        out.push(BiPoly::from_vector(&v, d1, d2));
    }
    Ok(out)
}

/// Range of `op` re-expressed in `P_target` (op's codomain must fit).
fn embed<T: Real>(op: &CoeffOperator<T>, target: (usize, usize)) -> DMatrix<Complex<T>> {
    let mut out = DMatrix::from_element(dim(target), op.matrix.ncols(), czero());
    for i in 0..dim(op.cod) {
        let (m, n) = split(i, op.cod);
        if m <= target.0 && n <= target.1 {
            let row = m * (target.1 + 1) + n;
            out.row_mut(row).copy_from(&op.matrix.row(i));
        }
    }
    out
}

/// Largest relative Gram-norm residual of a basis monomial after projection
/// onto `span{z₁^{k₁} z₂^{k₂} w : w ∈ W}` truncated to `P_{d1,d2}`.
pub fn wandering_reconstruction_residual<T: Real, S: GramSpace<T> + ?Sized>(
    space: &S,
    d1: usize,
    d2: usize,
) -> Result<T> {
    let w = wandering_subspace(space, d1, d2)?;
    let h = space.factor(d1, d2)?;
    let n = dim((d1, d2));
    let mut gens = Vec::new();
    for wv in &w {
        for k1 in 0..=d1 {
            for k2 in 0..=d2 {
                let mut g = wv.clone();
                for _ in 0..k1 {
                    g = g.mul_z(1);
                }
                for _ in 0..k2 {
                    g = g.mul_z(2);
                }
                let g = BiPoly::from_matrix(
                    g.matrix().view((0, 0), (d1 + 1, d2 + 1)).into_owned(),
                );
                gens.push(g.to_vector());
            }
        }
    }
    let span = DMatrix::from_columns(&gens);
    let lh = h.l().adjoint();
    let tilde = &lh * span;
    let svd = tilde.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(T::zero(), |a, b| a.max(b));
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > lit::<T>(RANK_TOL) * smax)
        .collect();
    let q = DMatrix::from_fn(n, keep.len(), |i, j| u[(i, keep[j])]);
    let mut worst = T::zero();
    for j in 0..n {
        let y: DVector<Complex<T>> = lh.column(j).into_owned();
        let r = &y - &q * (q.adjoint() * &y);
        worst = worst.max(r.norm() / y.norm());
    }
    Ok(worst)
}

/// Witness that `ker M_{z₁}^*` reduces `M_{z₂}`: for each kernel vector `v`
/// of the compression on `P_{d,d}`, the central-block entries of
/// `M_{z₁}^* M_{z₂} v` and `M_{z₁}^* M_{z₂}^* v`, relative to `‖v‖`.
pub fn reducing_residual<T: Real, S: GramSpace<T> + ?Sized>(
    space: &S,
    d: usize,
    margin: usize,
) -> Result<T> {
    if d < 2 {
        return Err(Error::Domain("reducing check needs degree ≥ 2".into()));
    }
    let a1 = shift_adjoint(1, space, d, d)?;
    let kernel = complement_of_range(&a1.matrix.adjoint(), lit(RANK_TOL));
    let up = shift_adjoint(1, space, d, d + 1)?.compose(&mz(2, d, d));
    let down = shift_adjoint(1, space, d, d - 1)?.compose(&shift_adjoint(2, space, d, d)?);
    let bound = d.saturating_sub(margin);
    let mut worst = T::zero();
    for v in kernel.column_iter() {
        let v: DVector<Complex<T>> = v.into_owned();
        for op in [&up, &down] {
            let out = BiPoly::from_vector(&(&op.matrix * &v), op.cod.0, op.cod.1);
            for m in 0..=bound.min(op.cod.0) {
                for nn in 0..=bound.min(op.cod.1) {
                    worst = worst.max(out.coeff(m, nn).norm_sqr().sqrt() / v.norm());
                }
            }
        }
    }
    Ok(worst)
}
