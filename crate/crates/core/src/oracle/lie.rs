//! Polynomial vector fields, their Lie brackets, and the rank at the
//! origin of the Lie algebra generated by `{f, b_1, …, b_m}`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::Polysystem;

/// Exponent vector, one entry per state coordinate.
pub type Monomial = Vec<u16>;

type Poly = BTreeMap<Monomial, f64>;

pub const LIE_MAX_N: usize = 4;
pub const LIE_MAX_K: usize = 4;
const INDEPENDENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyVectorField {
    n: usize,
    coords: Vec<Poly>,
}

fn add_term(p: &mut Poly, mono: Monomial, coeff: f64) {
    if coeff == 0.0 {
        return;
    }
    match p.entry(mono) {
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += coeff;
            if *slot.get() == 0.0 {
                slot.remove();
            }
        }
        Entry::Vacant(slot) => {
            slot.insert(coeff);
        }
    }
}

fn derivative(p: &Poly, var: usize) -> Poly {
    let mut out = Poly::new();
    for (mono, &c) in p {
        let e = mono[var];
        if e == 0 {
            continue;
        }
        let mut m = mono.clone();
        m[var] -= 1;
        add_term(&mut out, m, c * f64::from(e));
    }
    out
}

fn multiply_into(out: &mut Poly, a: &Poly, b: &Poly, sign: f64) {
    for (ma, &ca) in a {
        for (mb, &cb) in b {
            let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            add_term(out, m, sign * ca * cb);
        }
    }
}

impl PolyVectorField {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coords: vec![Poly::new(); n],
        }
    }

    /// Builds a field from `(coordinate, coefficient, exponents)` terms,
    /// merging repeated monomials and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64, Monomial)>,
    {
        let mut field = Self::zero(n);
        for (coord, coeff, mono) in terms {
            if coord >= n {
                return Err(Error::Dimension {
                    context: "vector field coordinate",
                    expected: n,
                    found: coord,
                });
            }
            if mono.len() != n {
                return Err(Error::Dimension {
                    context: "monomial exponent vector",
                    expected: n,
                    found: mono.len(),
                });
            }
            add_term(&mut field.coords[coord], mono, coeff);
        }
        Ok(field)
    }

    pub fn constant(v: &[f64]) -> Self {
        let n = v.len();
        let mut field = Self::zero(n);
        for (i, &c) in v.iter().enumerate() {
            add_term(&mut field.coords[i], vec![0; n], c);
        }
        field
    }

    /// The drift `A x^{k-1}` of a polysystem.
    pub fn drift(p: &Polysystem) -> Self {
        let n = p.n();
        let k = p.k();
        let mut field = Self::zero(n);
        for (index, value) in p.tensor().entries() {
            let mut mono = vec![0u16; n];
            for &i in &index[..k - 1] {
                mono[i] += 1;
            }
            add_term(&mut field.coords[index[k - 1]], mono, value);
        }
        field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(BTreeMap::is_empty)
    }

    /// Terms of one coordinate as `(exponents, coefficient)`.
    pub fn terms(&self, coord: usize) -> impl Iterator<Item = (&Monomial, f64)> + '_ {
        self.coords[coord].iter().map(|(m, c)| (m, *c))
    }

    /// Largest total degree over all terms; `None` for the zero field.
    pub fn degree(&self) -> Option<usize> {
        self.coords
            .iter()
            .flat_map(|p| p.keys())
            .map(|m| m.iter().map(|&e| usize::from(e)).sum())
            .max()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.coords
            .iter()
            .map(|p| {
                p.iter()
                    .map(|(m, c)| {
                        c * m
                            .iter()
                            .zip(x)
                            .map(|(&e, xi)| xi.powi(i32::from(e)))
                            .product::<f64>()
                    })
                    .sum()
            })
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = Self::zero(self.n);
        for (i, p) in self.coords.iter().enumerate() {
            for (m, c) in p {
                add_term(&mut out.coords[i], m.clone(), c * s);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, p) in other.coords.iter().enumerate() {
            for (m, c) in p {
                add_term(&mut out.coords[i], m.clone(), *c);
            }
        }
        out
    }

    fn keyed(&self) -> BTreeMap<(usize, Monomial), f64> {
        self.coords
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.iter().map(move |(m, c)| ((i, m.clone()), *c)))
            .collect()
    }
}

/// `[f, g] = ∇g·f − ∇f·g`.
pub fn lie_bracket(f: &PolyVectorField, g: &PolyVectorField) -> Result<PolyVectorField> {
    if f.n != g.n {
        return Err(Error::Dimension {
            context: "Lie bracket",
            expected: f.n,
            found: g.n,
        });
    }
    let n = f.n;
    let mut out = PolyVectorField::zero(n);
    for i in 0..n {
        for j in 0..n {
            let dg = derivative(&g.coords[i], j);
            multiply_into(&mut out.coords[i], &dg, &f.coords[j], 1.0);
            let df = derivative(&f.coords[i], j);
            multiply_into(&mut out.coords[i], &df, &g.coords[j], -1.0);
        }
    }
    Ok(out)
}

/// Incrementally reduced basis of coefficient vectors; pivots are
/// eliminated in insertion order.
type Coord = (usize, Monomial);

#[derive(Default)]
struct Echelon {
    rows: Vec<(Coord, BTreeMap<Coord, f64>)>,
}

impl Echelon {
    fn insert(&mut self, field: &PolyVectorField) -> bool {
        let mut v = field.keyed();
        let scale = v.values().fold(0.0f64, |a, c| a.max(c.abs()));
        if scale == 0.0 {
            return false;
        }
        for (pivot, row) in &self.rows {
            let Some(&c) = v.get(pivot) else { continue };
            for (key, r) in row {
                let slot = v.entry(key.clone()).or_insert(0.0);
                *slot -= c * r;
            }
            v.remove(pivot);
        }
        v.retain(|_, c| c.abs() > INDEPENDENCE_TOL * scale);
        let Some((pivot, &p)) = v.iter().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) else {
            return false;
        };
        let pivot = pivot.clone();
        let row = v.into_iter().map(|(k, c)| (k, c / p)).collect();
        self.rows.push((pivot, row));
        true
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieRank {
    /// Dimension of the generated algebra evaluated at the origin.
    pub rank: usize,
    /// The bracket search reached a fixed point before the depth cap.
    pub saturated: bool,
    /// Bracketing rounds performed.
    pub depth: usize,
    /// Independent fields kept in the truncated algebra.
    pub fields: usize,
}

/// Bracketing rounds allowed by default: `(k-1)` rounds turn one new
/// constant direction into the next, for at most `n` directions, plus two
/// rounds to confirm the fixed point.
pub fn default_depth_cap(n: usize, k: usize) -> usize {
    (k - 1) * n + 2
}

/// Rank at the origin of the Lie algebra generated by the drift and the
/// constant input fields.
///
/// Every bracket of homogeneous fields is homogeneous, and only degree-0
/// fields are non-zero at the origin. Fields of degree above `k-2` are
/// discarded: the constant directions of the full algebra are already
/// spanned by nested brackets `[c_1, [c_2, …, [c_{k-1}, f]]]` of constants
/// found so far, whose intermediate degrees stay at or below `k-2`, and
/// the subspace they span is invariant under the drift and inputs.
pub fn lie_algebra_rank_at_origin(p: &Polysystem, depth_cap: usize) -> Result<LieRank> {
    p.ensure_valid()?;
    if p.n() > LIE_MAX_N || p.k() > LIE_MAX_K {
        return Err(Error::Guard(format!(
            "symbolic Lie algebra limited to n <= {LIE_MAX_N}, k <= {LIE_MAX_K} (got n = {}, k = {})",
            p.n(),
            p.k()
        )));
    }
    if depth_cap == 0 {
        return Err(Error::Guard("depth cap must be at least 1".into()));
    }
    let max_degree = p.k() - 2;
    let mut spans: HashMap<usize, Echelon> = HashMap::new();
    let mut elements: Vec<PolyVectorField> = Vec::new();

    let drift = PolyVectorField::drift(p);
    let mut generators: Vec<PolyVectorField> = (0..p.m())
        .map(|j| PolyVectorField::constant(&p.control().column(j)))
        .collect();
    generators.push(drift);
    for g in generators {
        if let Some(d) = g.degree() {
            if spans.entry(d).or_default().insert(&g) {
                elements.push(g);
            }
        }
    }

    let mut frontier = 0;
    let mut depth = 0;
    let mut saturated = false;
    while depth < depth_cap {
        depth += 1;
        let len = elements.len();
        let mut found = Vec::new();
        for j in frontier..len {
            for i in 0..j {
                let b = lie_bracket(&elements[i], &elements[j])?;
                let Some(d) = b.degree() else { continue };
                if d > max_degree {
                    continue;
                }
                if spans.entry(d).or_default().insert(&b) {
                    found.push(b);
                }
            }
        }
        if found.is_empty() {
            saturated = true;
            break;
        }
        frontier = len;
        elements.extend(found);
    }

    Ok(LieRank {
        rank: spans.get(&0).map_or(0, Echelon::len),
        saturated,
        depth,
        fields: elements.len(),
    })
}
