//! JSON formats for measures, polynomials, moment tables and multishift
//! specs. Everything here is `f64`.
//!
//! ```text
//! measure  {"atoms":[{"angle":0.0,"mass":1.0}], "density":[[k,re,im],...], "lebesgue_mass":6.283185307179586}
//! poly     {"coeffs":[[m,n,re,im],...], "d1":2, "d2":3}
//! table    {"d1":2, "d2":2, "matrix":[[[re,im],...],...]}
//! spec     {"n":2, "N":5, "fiber_dim":1, "weights":[{"j":1, "alpha":[0,0], "matrix":[[re,im],...]}]}
//! ```

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::dirichlet2d::BiPoly;
use crate::error::{Error, Result};
use crate::extraction::MomentTable;
use crate::measures::{Atom, FourierMeasure};
use crate::multishift::MultishiftSpec;
use crate::MAX_DEGREE;

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn finite(what: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parse(format!("{what}: non-finite number")))
    }
}

fn index(what: &str, x: f64) -> Result<usize> {
    if x >= 0.0 && x.fract() == 0.0 && x <= MAX_DEGREE as f64 {
        Ok(x as usize)
    } else {
        Err(Error::Parse(format!("{what}: {x} is not an index in 0..={MAX_DEGREE}")))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomJson {
    angle: f64,
    mass: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureJson {
    #[serde(default)]
    atoms: Vec<AtomJson>,
    #[serde(default)]
    density: Vec<(i64, f64, f64)>,
    #[serde(default)]
    lebesgue_mass: f64,
}

/// Parses a measure. Only `k ≥ 0` density coefficients are accepted; the
/// negative ones are their conjugates and `c_0` must be real.
pub fn parse_measure(text: &str) -> Result<FourierMeasure<f64>> {
    let raw: MeasureJson = serde_json::from_str(text).map_err(parse_err)?;
    finite("lebesgue_mass", &[raw.lebesgue_mass])?;
    let mut atoms = Vec::with_capacity(raw.atoms.len());
    for a in &raw.atoms {
        finite("atom", &[a.angle, a.mass])?;
        atoms.push(Atom { angle: a.angle, mass: a.mass });
    }
    let mut density: Vec<Option<Complex<f64>>> = Vec::new();
    for &(k, re, im) in &raw.density {
        finite("density", &[re, im])?;
        if k < 0 {
            return Err(Error::Parse(format!("density index {k} < 0; give only k ≥ 0")));
        }
        let k = k as usize;
        if k > 4 * MAX_DEGREE {
            return Err(Error::Parse(format!("density index {k} too large")));
        }
        if k == 0 && im != 0.0 {
            return Err(Error::Parse("c_0 must be real".into()));
        }
        if density.len() <= k {
            density.resize(k + 1, None);
        }
        if density[k].replace(Complex::new(re, im)).is_some() {
            return Err(Error::Parse(format!("density index {k} given twice")));
        }
    }
    let density = density.into_iter().map(|c| c.unwrap_or_default()).collect();
    Ok(FourierMeasure::from_parts(atoms, density, raw.lebesgue_mass))
}

/// Inverse of [`parse_measure`]; the Lebesgue part is folded into `c_0`.
pub fn measure_to_json(nu: &FourierMeasure<f64>) -> serde_json::Value {
    let raw = MeasureJson {
        atoms: nu.atoms().iter().map(|a| AtomJson { angle: a.angle, mass: a.mass }).collect(),
        density: nu.density_coeffs().iter().enumerate().map(|(k, c)| (k as i64, c.re, c.im)).collect(),
        lebesgue_mass: 0.0,
    };
    serde_json::to_value(raw).expect("measure serializes")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    coeffs: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d2: Option<usize>,
}

/// Parses a polynomial; degrees default to the largest exponents present.
pub fn parse_poly(text: &str) -> Result<BiPoly<f64>> {
    let raw: PolyJson = serde_json::from_str(text).map_err(parse_err)?;
    let mut terms = Vec::with_capacity(raw.coeffs.len());
    for t in &raw.coeffs {
        finite("coeff", t)?;
        terms.push((index("m", t[0])?, index("n", t[1])?, Complex::new(t[2], t[3])));
    }
    let d1 = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let d2 = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let (d1, d2) = match (raw.d1, raw.d2) {
        (Some(a), Some(b)) if a >= d1 && b >= d2 && a <= MAX_DEGREE && b <= MAX_DEGREE => (a, b),
        (None, None) => (d1, d2),
        _ => return Err(Error::Parse("d1/d2 must both be given and cover every term".into())),
    };
    let mut seen = std::collections::HashSet::new();
    if let Some(t) = terms.iter().find(|t| !seen.insert((t.0, t.1))) {
        return Err(Error::Parse(format!("term ({}, {}) given twice", t.0, t.1)));
    }
    Ok(BiPoly::from_terms(&terms, d1, d2))
}

/// Nonzero terms plus explicit degrees.
pub fn poly_to_json(f: &BiPoly<f64>) -> serde_json::Value {
    let (d1, d2) = f.degrees();
    let mut coeffs = Vec::new();
    for m in 0..=d1 {
        for n in 0..=d2 {
            let a = f.coeff(m, n);
            if a.re != 0.0 || a.im != 0.0 {
                coeffs.push([m as f64, n as f64, a.re, a.im]);
            }
        }
    }
    serde_json::to_value(PolyJson { coeffs, d1: Some(d1), d2: Some(d2) }).expect("poly serializes")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableJson {
    d1: usize,
    d2: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<Complex<f64>>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrix must be square".into()));
    }
    for r in rows {
        for c in r {
            finite("matrix", c)?;
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| Complex::new(rows[i][j][0], rows[i][j][1])))
}

/// Parses a moment table; shape and Hermitian symmetry are checked by
/// [`MomentTable::new`].
pub fn parse_table(text: &str) -> Result<MomentTable<f64>> {
    let raw: TableJson = serde_json::from_str(text).map_err(parse_err)?;
    if raw.d1 > MAX_DEGREE || raw.d2 > MAX_DEGREE {
        return Err(Error::Parse(format!("degrees above {MAX_DEGREE}")));
    }
    let m = matrix_from_rows(&raw.matrix)?;
    MomentTable::new(raw.d1, raw.d2, m).map_err(|e| match e {
        Error::Domain(s) => Error::Parse(s),
        e => e,
    })
}

/// Square matrix in the table layout, row-major with `[re, im]` entries.
pub fn matrix_to_json(d1: usize, d2: usize, m: &DMatrix<Complex<f64>>) -> serde_json::Value {
    let matrix = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    serde_json::to_value(TableJson { d1, d2, matrix }).expect("table serializes")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightJson {
    j: usize,
    alpha: Vec<usize>,
    matrix: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    n: usize,
    #[serde(rename = "N")]
    big_n: usize,
    fiber_dim: usize,
    weights: Vec<WeightJson>,
}

/// Parses a multishift spec. `j` is 1-based, `matrix` is row-major; weights
/// not listed are the identity.
pub fn parse_spec(text: &str) -> Result<MultishiftSpec<f64>> {
    let raw: SpecJson = serde_json::from_str(text).map_err(parse_err)?;
    let (n, big_n, k) = (raw.n, raw.big_n, raw.fiber_dim);
    if n == 0 || k == 0 || big_n == 0 {
        return Err(Error::Parse("n, N and fiber_dim must be positive".into()));
    }
    if (big_n + 1).checked_pow(n as u32).and_then(|s| s.checked_mul(k)).is_none_or(|d| d > 4096) {
        return Err(Error::Parse("lattice too large (dimension above 4096)".into()));
    }
    let mut spec = MultishiftSpec::identity(n, big_n, k);
    let mut seen = std::collections::HashSet::new();
    for w in &raw.weights {
        if w.j == 0 || w.j > n {
            return Err(Error::Parse(format!("weight direction j = {} outside 1..={n}", w.j)));
        }
        if w.alpha.len() != n || w.alpha.iter().any(|&a| a > big_n) {
            return Err(Error::Parse(format!("alpha {:?} outside the lattice", w.alpha)));
        }
        if w.matrix.len() != k * k {
            return Err(Error::Parse(format!("weight at {:?} needs {} entries", w.alpha, k * k)));
        }
        if !seen.insert((w.j, w.alpha.clone())) {
            return Err(Error::Parse(format!("weight (j={}, alpha={:?}) given twice", w.j, w.alpha)));
        }
        for c in &w.matrix {
            finite("weight", c)?;
        }
        let a = DMatrix::from_fn(k, k, |r, c| Complex::new(w.matrix[r * k + c][0], w.matrix[r * k + c][1]));
        spec.set_weight(w.j, &w.alpha, a)?;
    }
    Ok(spec)
}

/// Every weight of the spec, in site order per direction.
pub fn spec_to_json(spec: &MultishiftSpec<f64>) -> serde_json::Value {
    let k = spec.fiber_dim();
    let mut weights = Vec::new();
    for j in 1..=spec.n() {
        for s in 0..spec.num_sites() {
            let alpha = spec.alpha(s);
            let a = spec.weight(j, &alpha);
            let matrix = (0..k * k).map(|i| [a[(i / k, i % k)].re, a[(i / k, i % k)].im]).collect();
            weights.push(WeightJson { j, alpha, matrix });
        }
    }
    let raw = SpecJson { n: spec.n(), big_n: spec.truncation(), fiber_dim: k, weights };
    serde_json::to_value(raw).expect("spec serializes")
}
