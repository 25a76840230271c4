//! Indicator polynomials and the generic `gamma`-element separating set.
//!
//! Functions on `N2^m` are carried as value tables; polynomial forms in the
//! `4m` matrix coordinates are expanded on demand as `sum_w h(w) f_w`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::canonical::{canonicalize, orbit_representatives_with, CanonicalForm};
use crate::counting::{ceil_log, gamma, kappa};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::gf::{Field, GaloisField, Gf};
use crate::invariants::InvariantFn;
use crate::matrices::{nilpotent_tuples, NilTuple};

/// Polynomial over GF(q) with every exponent below q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPoly {
    n: usize,
    q: u32,
    terms: BTreeMap<Vec<u8>, Gf>,
}

impl ReducedPoly {
    pub fn zero(f: &GaloisField, n: usize) -> Self {
        ReducedPoly { n, q: f.q(), terms: BTreeMap::new() }
    }

    pub fn constant(f: &GaloisField, n: usize, c: Gf) -> Self {
        let mut p = Self::zero(f, n);
        p.add_term(vec![0; n], c, f);
        p
    }

    /// The coordinate `y_i`, 0-based.
    pub fn variable(f: &GaloisField, n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        let mut p = Self::zero(f, n);
        p.add_term(exps, f.one(), f);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, Gf> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u8>, c: Gf, f: &GaloisField) {
        if f.is_zero(&c) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::ShapeMismatch(format!(
                "polynomials in {} variables over q={} and {} variables over q={}",
                self.n, self.q, other.n, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self, f: &GaloisField) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c, f);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Gf, f: &GaloisField) -> Self {
        let mut out = Self::zero(f, self.n);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), f.mul(a, &c), f);
        }
        out
    }

    pub fn sub(&self, other: &Self, f: &GaloisField) -> Result<Self> {
        self.add(&other.scale(f.neg(&f.one()), f), f)
    }

    /// Product, reduced modulo `y^q - y` in each variable.
    pub fn mul(&self, other: &Self, f: &GaloisField) -> Result<Self> {
        self.check(other)?;
        let q = self.q as u16;
        let mut out = Self::zero(f, self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps = e1
                    .iter()
                    .zip(e2)
                    .map(|(&a, &b)| {
                        let mut s = a as u16 + b as u16;
                        while s >= q {
                            s -= q - 1;
                        }
                        s as u8
                    })
                    .collect();
                out.add_term(exps, f.mul(c1, c2), f);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32, f: &GaloisField) -> Result<Self> {
        let mut acc = Self::constant(f, self.n, f.one());
        for _ in 0..e {
            acc = acc.mul(self, f)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[Gf], f: &GaloisField) -> Result<Gf> {
        if point.len() != self.n {
            return Err(Error::ShapeMismatch(format!("point of length {} for {} variables", point.len(), self.n)));
        }
        Ok(self.terms.iter().fold(f.zero(), |acc, (exps, c)| {
            let mono = exps
                .iter()
                .zip(point)
                .fold(*c, |m, (&e, x)| f.mul(&m, &f.pow(x, e as u64)));
            f.add(&acc, &mono)
        }))
    }

    /// Total degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum())
            .max()
            .unwrap_or(-1)
    }

    pub fn to_json(&self, f: &GaloisField) -> PolyJson {
        PolyJson {
            n: self.n,
            q: self.q,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exps: e.clone(), coeff: f.elem_to_json(c) })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson, f: &GaloisField) -> Result<Self> {
        if j.q != f.q() {
            return Err(Error::FieldMismatch);
        }
        let mut p = Self::zero(f, j.n);
        for t in &j.terms {
            if t.exps.len() != j.n || t.exps.iter().any(|&e| e as u32 >= j.q) {
                return Err(Error::ShapeMismatch(format!("bad exponent vector {:?}", t.exps)));
            }
            p.add_term(t.exps.clone(), f.elem_from_json(&t.coeff)?, f);
        }
        Ok(p)
    }
}

/// JSON shape `{n, q, terms: [{exps, coeff}]}`, terms sorted by exponents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub q: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u8>,
    pub coeff: Value,
}

/// `prod_{a != c} (y - a)` as a coefficient list, lowest degree first.
fn univariate_factor(c: Gf, f: &GaloisField) -> Vec<Gf> {
    let mut coeffs = vec![f.one()];
    for a in f.field_elements(false) {
        if a == c {
            continue;
        }
        let mut next = vec![f.zero(); coeffs.len() + 1];
        for (k, x) in coeffs.iter().enumerate() {
            next[k + 1] = f.add(&next[k + 1], x);
            next[k] = f.sub(&next[k], &f.mul(x, &a));
        }
        coeffs = next;
    }
    coeffs
}

/// `f_w = (-1)^n prod_i prod_{a != w_i} (y_i - a)`: 1 at `w`, 0 elsewhere.
pub fn point_indicator(w: &[Gf], f: &GaloisField) -> ReducedPoly {
    let n = w.len();
    let sign = if n % 2 == 0 { f.one() } else { f.neg(&f.one()) };
    let mut acc = ReducedPoly::constant(f, n, sign);
    for (i, &c) in w.iter().enumerate() {
        let mut factor = ReducedPoly::zero(f, n);
        for (k, a) in univariate_factor(c, f).into_iter().enumerate() {
            let mut exps = vec![0; n];
            exps[i] = k as u8;
            factor.add_term(exps, a, f);
        }
        acc = acc.mul(&factor, f).expect("same shape");
    }
    acc
}

/// `sum_w value(w) f_w` over the given points.
pub fn interpolate(points: &[Vec<Gf>], values: &[Gf], n: usize, f: &GaloisField, strategy: Strategy) -> Result<ReducedPoly> {
    if points.len() != values.len() || points.iter().any(|p| p.len() != n) {
        return Err(Error::ShapeMismatch("points and values disagree".into()));
    }
    let sum = exec::fold_range(
        strategy,
        points.len(),
        || ReducedPoly::zero(f, n),
        |acc, i| {
            if f.is_zero(&values[i]) {
                return acc;
            }
            let term = point_indicator(&points[i], f).scale(values[i], f);
            acc.add(&term, f).expect("same shape")
        },
        |a, b| a.add(&b, f).expect("same shape"),
    );
    Ok(sum)
}

/// `f_j = sum_{u in U_j} f_u` for an orbit given as coordinate points.
pub fn orbit_indicator(orbit: &[Vec<Gf>], n: usize, f: &GaloisField) -> Result<ReducedPoly> {
    interpolate(orbit, &vec![f.one(); orbit.len()], n, f, Strategy::default())
}

/// The points of `N2^m` with their orbit indices.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub m: usize,
    pub reps: Vec<CanonicalForm<Gf>>,
    pub points: Vec<NilTuple<Gf>>,
    pub labels: Vec<usize>,
}

impl OrbitTable {
    pub fn new(f: &GaloisField, m: usize, strategy: Strategy) -> Result<Self> {
        let reps = orbit_representatives_with(f, m, strategy)?;
        let index: HashMap<&CanonicalForm<Gf>, usize> = reps.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let points = nilpotent_tuples(f, m);
        let labels = exec::map_slice(strategy, &points, |t| {
            let (form, _) = canonicalize(t, f)?;
            index.get(&form).copied().ok_or_else(|| Error::Invalid("form missing from representatives".into()))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        Ok(OrbitTable { m, reps, points, labels })
    }

    pub fn kappa(&self) -> usize {
        self.reps.len()
    }

    pub fn n(&self) -> usize {
        4 * self.m
    }

    pub fn coordinates(&self) -> Vec<Vec<Gf>> {
        self.points.iter().map(NilTuple::coordinates).collect()
    }

    pub fn orbit_points(&self, j: usize) -> Vec<Vec<Gf>> {
        self.points
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == j)
            .map(|(p, _)| p.coordinates())
            .collect()
    }

    /// Reduced polynomial of the function taking `orbit_values[j]` on orbit j.
    pub fn poly(&self, orbit_values: &[Gf], f: &GaloisField, strategy: Strategy) -> Result<ReducedPoly> {
        if orbit_values.len() != self.kappa() {
            return Err(Error::ShapeMismatch(format!("{} values for {} orbits", orbit_values.len(), self.kappa())));
        }
        let values: Vec<Gf> = self.labels.iter().map(|&l| orbit_values[l]).collect();
        interpolate(&self.coordinates(), &values, self.n(), f, strategy)
    }
}

/// A `gamma x kappa` matrix with pairwise distinct columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaMatrix {
    rows: Vec<Vec<Gf>>,
}

impl AlphaMatrix {
    pub fn new(rows: Vec<Vec<Gf>>) -> Result<Self> {
        let a = Self::unchecked(rows)?;
        let mut seen: HashMap<Vec<Gf>, usize> = HashMap::new();
        for j in 0..a.kappa() {
            if let Some(&i) = seen.get(&a.column(j)) {
                return Err(Error::DuplicateColumns(i, j));
            }
            seen.insert(a.column(j), j);
        }
        Ok(a)
    }

    fn unchecked(rows: Vec<Vec<Gf>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::ShapeMismatch("ragged alpha matrix".into()));
        }
        Ok(AlphaMatrix { rows })
    }

    /// Columns are the first `kappa` vectors of `F^gamma` in lexicographic
    /// element order.
    pub fn lexicographic(f: &GaloisField, gamma: usize, kappa: usize) -> Result<Self> {
        let q = f.q() as u128;
        if (kappa as u128) > q.saturating_pow(gamma as u32) {
            return Err(Error::AlphaShape { rows: gamma, cols: kappa, kappa });
        }
        let mut rows = vec![vec![f.zero(); kappa]; gamma];
        for j in 0..kappa {
            let mut c = j as u128;
            for row in rows.iter_mut().rev() {
                row[j] = f.elem((c % q) as u64).expect("digit below q");
                c /= q;
            }
        }
        Self::new(rows)
    }

    pub fn gamma(&self) -> usize {
        self.rows.len()
    }

    pub fn kappa(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<Gf>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Gf> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Functions `h_i = sum_j alpha_ij f_j` as value tables over orbits.
#[derive(Clone, Debug)]
pub struct HSet {
    pub q: u32,
    pub table: OrbitTable,
    /// `values[i][j]` is `h_i` on orbit `j`.
    pub values: Vec<Vec<Gf>>,
}

impl HSet {
    /// Wraps arbitrary value tables without checking them.
    pub fn from_parts(f: &GaloisField, table: OrbitTable, values: Vec<Vec<Gf>>) -> Self {
        HSet { q: f.q(), table, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kappa(&self) -> usize {
        self.table.kappa()
    }

    /// Values of all `h_i` on orbit `j`.
    pub fn orbit_vector(&self, j: usize) -> Vec<Gf> {
        self.values.iter().map(|h| h[j]).collect()
    }

    /// `h_i` at an arbitrary tuple.
    pub fn eval(&self, i: usize, t: &NilTuple<Gf>, f: &GaloisField) -> Result<Gf> {
        let (form, _) = canonicalize(t, f)?;
        let j = self
            .table
            .reps
            .iter()
            .position(|r| *r == form)
            .ok_or_else(|| Error::Invalid("form missing from representatives".into()))?;
        Ok(self.values[i][j])
    }

    pub fn poly(&self, i: usize, f: &GaloisField, strategy: Strategy) -> Result<ReducedPoly> {
        self.table.poly(&self.values[i], f, strategy)
    }

    /// `h_i` as an orbit-table invariant.
    pub fn as_invariant(&self, i: usize) -> InvariantFn<Gf> {
        let table = self.table.reps.iter().cloned().zip(self.values[i].iter().copied()).collect();
        InvariantFn::Indicator { label: format!("h{}", i + 1), table: std::sync::Arc::new(table) }
    }
}

/// Builds `h_1..h_gamma` from the orbit indicators and `alpha`
/// (lexicographic by default).
pub fn build_h_set(f: &GaloisField, m: usize, alpha: Option<AlphaMatrix>, strategy: Strategy) -> Result<HSet> {
    let table = OrbitTable::new(f, m, strategy)?;
    let kappa_count = table.kappa();
    let formula = kappa(f.q() as u64, m as u32)?;
    if formula.to_usize() != Some(kappa_count) {
        return Err(Error::Invalid(format!("{kappa_count} representatives but kappa = {formula}")));
    }
    let g = gamma(f.q() as u64, m as u32)? as usize;
    let alpha = match alpha {
        Some(a) => {
            if a.gamma() != g || a.kappa() != kappa_count {
                return Err(Error::AlphaShape { rows: a.gamma(), cols: a.kappa(), kappa: kappa_count });
            }
            AlphaMatrix::new(a.rows)?
        }
        None => AlphaMatrix::lexicographic(f, g, kappa_count)?,
    };
    // h_i on the representative of orbit k: sum_j alpha_ij f_j(rep_k)
    let rep_labels: Vec<usize> = exec::map_slice(strategy, &table.reps, |r| {
        let (form, _) = canonicalize(&r.materialize(f), f)?;
        table
            .reps
            .iter()
            .position(|x| *x == form)
            .ok_or_else(|| Error::Invalid("representative is not canonical".into()))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let values = alpha
        .rows()
        .iter()
        .map(|row| {
            (0..kappa_count)
                .map(|k| {
                    row.iter().enumerate().fold(f.zero(), |acc, (j, a)| {
                        let fj = if rep_labels[k] == j { f.one() } else { f.zero() };
                        f.add(&acc, &f.mul(a, &fj))
                    })
                })
                .collect()
        })
        .collect();
    Ok(HSet { q: f.q(), table, values })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVerdict {
    pub size: usize,
    pub kappa: usize,
    /// `ceil(log_q kappa)`, the least size of any separating set.
    pub lower_bound: u32,
    /// First pair of orbits with equal value vectors.
    pub collision: Option<(usize, usize)>,
    /// Dropping any single `h_i` leaves a non-separating set.
    pub no_smaller_subset: bool,
    /// `kappa > q^(size-1)`.
    pub counting_bound: bool,
}

impl HVerdict {
    pub fn separating(&self) -> bool {
        self.collision.is_none()
    }

    pub fn holds(&self) -> bool {
        self.separating() && self.no_smaller_subset && self.counting_bound
    }
}

fn first_collision(vectors: &[Vec<Gf>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<&[Gf], usize> = HashMap::new();
    let mut best: Option<(usize, usize)> = None;
    for (j, v) in vectors.iter().enumerate() {
        match seen.get(v.as_slice()) {
            Some(&i) => {
                if best.is_none_or(|b| (i, j) < b) {
                    best = Some((i, j));
                }
            }
            None => {
                seen.insert(v, j);
            }
        }
    }
    best
}

pub fn verify_h_separating(h: &HSet) -> HVerdict {
    let kappa_count = h.kappa();
    let vectors: Vec<Vec<Gf>> = (0..kappa_count).map(|j| h.orbit_vector(j)).collect();
    let collision = first_collision(&vectors);
    let no_smaller_subset = (0..h.len()).all(|drop| {
        let reduced: Vec<Vec<Gf>> = vectors
            .iter()
            .map(|v| v.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, x)| *x).collect())
            .collect();
        let distinct: HashSet<&Vec<Gf>> = reduced.iter().collect();
        distinct.len() < kappa_count
    });
    let size = h.len() as u32;
    let counting_bound = size == 0 || (kappa_count as u128) > (h.q as u128).saturating_pow(size - 1);
    HVerdict {
        size: h.len(),
        kappa: kappa_count,
        lower_bound: ceil_log(h.q as u64, &(kappa_count as u64).into()),
        collision,
        no_smaller_subset,
        counting_bound,
    }
}

/// Total degree, -1 for the zero polynomial.
pub fn poly_degree(p: &ReducedPoly) -> i64 {
    p.degree()
}

/// Index of coordinate `(u, v)` of `Y_i` (all 1-based) among the `4m`.
fn coord(i: usize, u: usize, v: usize) -> usize {
    4 * (i - 1) + 2 * (u - 1) + (v - 1)
}

/// Explicit polynomial form of an invariant in the `4m` coordinates.
/// Indicator invariants are interpolated over `N2^m`.
pub fn invariant_poly(g: &InvariantFn<Gf>, f: &GaloisField, m: usize) -> Result<ReducedPoly> {
    let n = 4 * m;
    let y = |i: usize, u: usize, v: usize| ReducedPoly::variable(f, n, coord(i, u, v));
    let check = |idx: &[usize]| match idx.iter().find(|&&i| i == 0 || i > m) {
        Some(&index) => Err(Error::IndexOutOfRange { index, m }),
        None => Ok(()),
    };
    let one = ReducedPoly::constant(f, n, f.one());
    let e = f.q() - 1;
    match g {
        InvariantFn::TrPair(i, j) => {
            check(&[*i, *j])?;
            let mut p = ReducedPoly::zero(f, n);
            for u in 1..=2 {
                for v in 1..=2 {
                    p = p.add(&y(*i, u, v).mul(&y(*j, v, u), f)?, f)?;
                }
            }
            Ok(p)
        }
        InvariantFn::TrTriple(i, j, k) => {
            check(&[*i, *j, *k])?;
            let mut p = ReducedPoly::zero(f, n);
            for u in 1..=2 {
                for v in 1..=2 {
                    for w in 1..=2 {
                        p = p.add(&y(*i, u, v).mul(&y(*j, v, w), f)?.mul(&y(*k, w, u), f)?, f)?;
                    }
                }
            }
            Ok(p)
        }
        InvariantFn::Zeta(i) => {
            check(&[*i])?;
            y(*i, 1, 1)
                .pow(e, f)?
                .sub(&y(*i, 1, 2).pow(e, f)?, f)?
                .sub(&y(*i, 2, 1).pow(e, f)?, f)?
                .add(&one, f)
        }
        InvariantFn::Eta { alpha, i, j } => {
            check(&[*i, *j])?;
            let mut p = one.clone();
            for u in 1..=2 {
                for v in 1..=2 {
                    let d = y(*i, u, v).scale(*alpha, f).sub(&y(*j, u, v), f)?;
                    p = p.mul(&d.pow(e, f)?.sub(&one, f)?, f)?;
                }
            }
            Ok(p)
        }
        InvariantFn::Indicator { table, .. } => {
            let points = nilpotent_tuples(f, m);
            let values = points
                .iter()
                .map(|t| g.eval(t, f))
                .collect::<Result<Vec<_>>>()?;
            let coords: Vec<Vec<Gf>> = points.iter().map(NilTuple::coordinates).collect();
            let _ = table;
            interpolate(&coords, &values, n, f, Strategy::default())
        }
    }
}
