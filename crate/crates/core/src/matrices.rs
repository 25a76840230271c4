//! Small dense matrices over a [`Field`], nilpotent tuples, and exhaustive
//! enumeration of nilpotent and invertible matrices over a finite field.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf::{Field, GaloisField, Gf};

/// Enumerations refuse to scan more than this many candidate matrices.
pub const ENUMERATION_LIMIT: u64 = 50_000_000;

/// A 2x2 matrix, entries stored row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mat2<E> {
    pub entries: [E; 4],
}

impl<E: Clone> Mat2<E> {
    pub fn new(a11: E, a12: E, a21: E, a22: E) -> Self {
        Mat2 { entries: [a11, a12, a21, a22] }
    }

    /// Entry at 1-based position `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.entries[(i - 1) * 2 + (j - 1)]
    }

    pub fn zero<F: Field<Elem = E>>(f: &F) -> Self {
        Self::new(f.zero(), f.zero(), f.zero(), f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F) -> Self {
        Self::new(f.one(), f.zero(), f.zero(), f.one())
    }

    /// Matrix unit with a one at 1-based `(i, j)`.
    pub fn unit<F: Field<Elem = E>>(f: &F, i: usize, j: usize) -> Self {
        let mut m = Self::zero(f);
        m.entries[(i - 1) * 2 + (j - 1)] = f.one();
        m
    }

    pub fn e12<F: Field<Elem = E>>(f: &F) -> Self {
        Self::unit(f, 1, 2)
    }

    pub fn e21<F: Field<Elem = E>>(f: &F) -> Self {
        Self::unit(f, 2, 1)
    }

    /// The traceless matrix `[[b, c], [d, -b]]`.
    pub fn traceless<F: Field<Elem = E>>(f: &F, b: E, c: E, d: E) -> Self {
        let nb = f.neg(&b);
        Self::new(b, c, d, nb)
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, g, h, k] = &other.entries;
        Self::new(f.add(a, e), f.add(b, g), f.add(c, h), f.add(d, k))
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let [a, b, c, d] = &self.entries;
        Self::new(f.neg(a), f.neg(b), f.neg(c), f.neg(d))
    }

    pub fn scale<F: Field<Elem = E>>(&self, s: &E, f: &F) -> Self {
        let [a, b, c, d] = &self.entries;
        Self::new(f.mul(s, a), f.mul(s, b), f.mul(s, c), f.mul(s, d))
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, g, h, k] = &other.entries;
        let dot = |x: &E, y: &E, z: &E, w: &E| f.add(&f.mul(x, y), &f.mul(z, w));
        Self::new(dot(a, e, b, h), dot(a, g, b, k), dot(c, e, d, h), dot(c, g, d, k))
    }

    pub fn trace<F: Field<Elem = E>>(&self, f: &F) -> E {
        f.add(&self.entries[0], &self.entries[3])
    }

    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        let [a, b, c, d] = &self.entries;
        f.sub(&f.mul(a, d), &f.mul(b, c))
    }

    /// Trace and determinant both vanish.
    pub fn is_nilpotent<F: Field<Elem = E>>(&self, f: &F) -> bool {
        f.is_zero(&self.trace(f)) && f.is_zero(&self.det(f))
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.entries.iter().all(|x| f.is_zero(x))
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        let det_inv = f.inv(&self.det(f))?;
        let [a, b, c, d] = &self.entries;
        Some(Self::new(
            f.mul(&det_inv, d),
            f.mul(&det_inv, &f.neg(b)),
            f.mul(&det_inv, &f.neg(c)),
            f.mul(&det_inv, a),
        ))
    }

    /// Product with a column vector.
    pub fn apply<F: Field<Elem = E>>(&self, v: &[E; 2], f: &F) -> [E; 2] {
        let [a, b, c, d] = &self.entries;
        [
            f.add(&f.mul(a, &v[0]), &f.mul(b, &v[1])),
            f.add(&f.mul(c, &v[0]), &f.mul(d, &v[1])),
        ]
    }

    /// `g A g^{-1}` with the inverse supplied by the caller.
    pub fn conjugate_by<F: Field<Elem = E>>(&self, g: &Self, g_inv: &Self, f: &F) -> Self {
        g.mul(self, f).mul(g_inv, f)
    }

    pub fn to_matn(&self) -> MatN<E> {
        MatN { n: 2, entries: self.entries.to_vec() }
    }
}

impl Mat2<Gf> {
    /// Base-q code of the entries, `a11` most significant.
    pub fn code(&self, q: u32) -> u32 {
        self.entries.iter().fold(0, |acc, x| acc * q + x.code())
    }
}

/// An n x n matrix, row-major, n in {2, 3}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MatN<E> {
    n: usize,
    entries: Vec<E>,
}

impl<E: Clone> MatN<E> {
    pub fn from_entries(n: usize, entries: Vec<E>) -> Result<Self> {
        check_dim(n)?;
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(MatN { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.n + j]
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        MatN { n, entries: vec![f.zero(); n * n] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zero(f, n);
        for i in 0..n {
            m.entries[i * n + i] = f.one();
        }
        m
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", self.n, self.n, other.n, other.n)))
        }
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f.add(a, b)).collect();
        Ok(MatN { n: self.n, entries })
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        MatN { n: self.n, entries: self.entries.iter().map(|a| f.neg(a)).collect() }
    }

    pub fn scale<F: Field<Elem = E>>(&self, s: &E, f: &F) -> Self {
        MatN { n: self.n, entries: self.entries.iter().map(|a| f.mul(s, a)).collect() }
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.mul_unchecked(other, f))
    }

    fn mul_unchecked<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    acc = f.add(&acc, &f.mul(&self.entries[i * n + k], &other.entries[k * n + j]));
                }
                entries.push(acc);
            }
        }
        MatN { n, entries }
    }

    pub fn trace<F: Field<Elem = E>>(&self, f: &F) -> E {
        (0..self.n).fold(f.zero(), |acc, i| f.add(&acc, &self.entries[i * self.n + i]))
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.entries.iter().all(|x| f.is_zero(x))
    }

    /// `A^n = 0`.
    pub fn is_nilpotent<F: Field<Elem = E>>(&self, f: &F) -> bool {
        let mut power = self.clone();
        for _ in 1..self.n {
            power = power.mul_unchecked(self, f);
        }
        power.is_zero(f)
    }

    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        let e = &self.entries;
        match self.n {
            2 => f.sub(&f.mul(&e[0], &e[3]), &f.mul(&e[1], &e[2])),
            3 => {
                let minor = |a: usize, b: usize, c: usize, d: usize| {
                    f.sub(&f.mul(&e[a], &e[b]), &f.mul(&e[c], &e[d]))
                };
                let t0 = f.mul(&e[0], &minor(4, 8, 5, 7));
                let t1 = f.mul(&e[1], &minor(3, 8, 5, 6));
                let t2 = f.mul(&e[2], &minor(3, 7, 4, 6));
                f.add(&f.sub(&t0, &t1), &t2)
            }
            _ => unreachable!("dimension checked at construction"),
        }
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(f, n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !f.is_zero(&a[r * n + col]))?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let s = f.inv(&a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = f.mul(&s, &a[col * n + j]);
                inv[col * n + j] = f.mul(&s, &inv[col * n + j]);
            }
            for r in 0..n {
                if r != col && !f.is_zero(&a[r * n + col]) {
                    let factor = a[r * n + col].clone();
                    for j in 0..n {
                        a[r * n + j] = f.sub(&a[r * n + j], &f.mul(&factor, &a[col * n + j]));
                        inv[r * n + j] = f.sub(&inv[r * n + j], &f.mul(&factor, &inv[col * n + j]));
                    }
                }
            }
        }
        Some(MatN { n, entries: inv })
    }

    pub fn to_mat2(&self) -> Result<Mat2<E>> {
        match self.entries.as_slice() {
            [a, b, c, d] => Ok(Mat2::new(a.clone(), b.clone(), c.clone(), d.clone())),
            _ => Err(Error::ShapeMismatch(format!("expected 2x2, got {}x{}", self.n, self.n))),
        }
    }
}

impl MatN<Gf> {
    /// Base-q code of the entries, first entry most significant.
    pub fn code(&self, q: u32) -> u64 {
        self.entries.iter().fold(0, |acc, x| acc * q as u64 + x.code() as u64)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// An m-tuple of nilpotent 2x2 matrices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NilTuple<E> {
    mats: Vec<Mat2<E>>,
}

impl<E: Clone> NilTuple<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, mats: Vec<Mat2<E>>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if mats.iter().any(|a| !a.is_nilpotent(f)) {
            return Err(Error::NotNilpotent);
        }
        Ok(NilTuple { mats })
    }

    /// Caller guarantees every entry is nilpotent.
    pub(crate) fn from_trusted(mats: Vec<Mat2<E>>) -> Self {
        NilTuple { mats }
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, m: usize) -> Self {
        NilTuple { mats: vec![Mat2::zero(f); m] }
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Mat2<E>] {
        &self.mats
    }

    pub fn get(&self, i: usize) -> &Mat2<E> {
        &self.mats[i]
    }

    pub fn into_mats(self) -> Vec<Mat2<E>> {
        self.mats
    }

    /// `g . T` for invertible `g`.
    pub fn conjugate<F: Field<Elem = E>>(&self, g: &Mat2<E>, f: &F) -> Result<Self> {
        let g_inv = g.inverse(f).ok_or(Error::Singular)?;
        Ok(self.conjugate_with(g, &g_inv, f))
    }

    pub fn conjugate_with<F: Field<Elem = E>>(&self, g: &Mat2<E>, g_inv: &Mat2<E>, f: &F) -> Self {
        NilTuple { mats: self.mats.iter().map(|a| a.conjugate_by(g, g_inv, f)).collect() }
    }

    /// Reorders entries: position `i` of the result holds entry `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        NilTuple { mats: perm.iter().map(|&i| self.mats[i].clone()).collect() }
    }

    /// The 4m coordinates: entries row-major, tuple order.
    pub fn coordinates(&self) -> Vec<E> {
        self.mats.iter().flat_map(|a| a.entries.iter().cloned()).collect()
    }
}

impl NilTuple<Gf> {
    /// Mixed-radix index with respect to `nilpotents` (as returned by
    /// [`enumerate_nilpotent2`]), first entry most significant.
    pub fn index_in(&self, index_of_code: &impl Fn(u32) -> usize, base: usize, q: u32) -> usize {
        self.mats.iter().fold(0, |acc, a| acc * base + index_of_code(a.code(q)))
    }
}

/// Simultaneous conjugation of a tuple of n x n matrices.
pub fn conjugate_tuple<F: Field>(g: &MatN<F::Elem>, tuple: &[MatN<F::Elem>], f: &F) -> Result<Vec<MatN<F::Elem>>> {
    let g_inv = g.inverse(f).ok_or(Error::Singular)?;
    tuple
        .iter()
        .map(|a| g.mul(a, f)?.mul(&g_inv, f))
        .collect()
}

/// All nilpotent 2x2 matrices over `f`, in base-q lexicographic entry order.
pub fn enumerate_nilpotent2(f: &GaloisField) -> Vec<Mat2<Gf>> {
    let els = f.field_elements(false);
    let mut out = Vec::with_capacity((f.q() * f.q()) as usize);
    for &a in &els {
        let d = f.neg(&a);
        for &b in &els {
            for &c in &els {
                let m = Mat2::new(a, b, c, d);
                if f.is_zero(&m.det(f)) {
                    out.push(m);
                }
            }
        }
    }
    out
}

fn check_enumeration(f: &GaloisField, n: usize) -> Result<()> {
    check_dim(n)?;
    let needed = (f.q() as u128).pow((n * n) as u32);
    if needed > ENUMERATION_LIMIT as u128 {
        return Err(Error::BudgetExceeded { needed, budget: ENUMERATION_LIMIT as u128 });
    }
    Ok(())
}

fn scan_all<P: Fn(&MatN<Gf>) -> bool>(f: &GaloisField, n: usize, keep: P) -> Vec<MatN<Gf>> {
    let q = f.q() as u64;
    let total = q.pow((n * n) as u32);
    let mut out = Vec::new();
    let mut entries = vec![Gf(0); n * n];
    for code in 0..total {
        let mut c = code;
        for slot in entries.iter_mut().rev() {
            *slot = Gf((c % q) as u8);
            c /= q;
        }
        let m = MatN { n, entries: entries.clone() };
        if keep(&m) {
            out.push(m);
        }
    }
    out
}

/// All of `N2^m`, in mixed-radix order over [`enumerate_nilpotent2`].
pub fn nilpotent_tuples(f: &GaloisField, m: usize) -> Vec<NilTuple<Gf>> {
    let nil = enumerate_nilpotent2(f);
    let base = nil.len();
    (0..base.pow(m as u32))
        .map(|mut code| {
            let mut mats = vec![nil[0].clone(); m];
            for slot in mats.iter_mut().rev() {
                *slot = nil[code % base].clone();
                code /= base;
            }
            NilTuple::from_trusted(mats)
        })
        .collect()
}

/// All nilpotent n x n matrices, base-q lexicographic order.
pub fn enumerate_nilpotent(f: &GaloisField, n: usize) -> Result<Vec<MatN<Gf>>> {
    check_dim(n)?;
    if n == 2 {
        return Ok(enumerate_nilpotent2(f).iter().map(Mat2::to_matn).collect());
    }
    check_enumeration(f, n)?;
    Ok(scan_all(f, n, |m| m.is_nilpotent(f)))
}

/// All invertible n x n matrices, base-q lexicographic order.
pub fn enumerate_gl(f: &GaloisField, n: usize) -> Result<Vec<MatN<Gf>>> {
    check_enumeration(f, n)?;
    Ok(scan_all(f, n, |m| !f.is_zero(&m.det(f))))
}

/// GL2 as pairs `(g, g^{-1})`.
pub fn enumerate_gl2_with_inverses(f: &GaloisField) -> Result<Vec<(Mat2<Gf>, Mat2<Gf>)>> {
    Ok(enumerate_gl(f, 2)?
        .into_iter()
        .map(|g| {
            let g2 = g.to_mat2().expect("2x2");
            let inv = g2.inverse(f).expect("invertible");
            (g2, inv)
        })
        .collect())
}

/// `prod_{i<n} (q^n - q^i)`.
pub fn gl_order(q: u64, n: u32) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

/// Wire form of a matrix: field spec plus row-major element codes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: String,
    pub n: usize,
    pub entries: Vec<Value>,
}

pub fn matrix_to_json<F: Field>(m: &MatN<F::Elem>, f: &F) -> MatrixJson {
    MatrixJson {
        field: f.spec_string(),
        n: m.n(),
        entries: m.entries().iter().map(|x| f.elem_to_json(x)).collect(),
    }
}

pub fn matrix_from_json<F: Field>(j: &MatrixJson, f: &F) -> Result<MatN<F::Elem>> {
    if j.field != f.spec_string() {
        return Err(Error::FieldMismatch);
    }
    let entries = j.entries.iter().map(|v| f.elem_from_json(v)).collect::<Result<Vec<_>>>()?;
    MatN::from_entries(j.n, entries)
}

/// Parses a tuple written as a JSON array of row-major 2x2 entry arrays,
/// e.g. `[[0,1,0,0],[0,0,1,0]]`.
pub fn tuple_from_json<F: Field>(v: &Value, f: &F) -> Result<NilTuple<F::Elem>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Invalid("tuple must be a JSON array".into()))?;
    let mats = arr
        .iter()
        .map(|m| {
            let es = m
                .as_array()
                .filter(|es| es.len() == 4)
                .ok_or_else(|| Error::Invalid(format!("expected 4 entries, got {m}")))?;
            let es = es.iter().map(|x| f.elem_from_json(x)).collect::<Result<Vec<_>>>()?;
            Ok(Mat2::new(es[0].clone(), es[1].clone(), es[2].clone(), es[3].clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    NilTuple::new(f, mats)
}

pub fn tuple_to_json<F: Field>(t: &NilTuple<F::Elem>, f: &F) -> Value {
    Value::Array(
        t.mats()
            .iter()
            .map(|a| Value::Array(a.entries.iter().map(|x| f.elem_to_json(x)).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Rationals;

    fn f(p: u64) -> GaloisField {
        GaloisField::prime(p).unwrap()
    }

    #[test]
    fn unit_products() {
        let f2 = f(2);
        let e12 = Mat2::e12(&f2);
        let e21 = Mat2::e21(&f2);
        assert_eq!(e12.mul(&e21, &f2), Mat2::unit(&f2, 1, 1));
        assert_eq!(e12.mul(&e12, &f2), Mat2::zero(&f2));
        let f3 = f(3);
        assert_eq!(Mat2::e12(&f3).scale(&Gf(2), &f3), Mat2::new(Gf(0), Gf(2), Gf(0), Gf(0)));
        assert_eq!(Mat2::unit(&f3, 1, 1).trace(&f3), Gf(1));
        assert_eq!(Mat2::e12(&f3).det(&f3), Gf(0));
    }

    #[test]
    fn nilpotency() {
        let f3 = f(3);
        assert!(Mat2::e12(&f3).is_nilpotent(&f3));
        assert!(!Mat2::unit(&f3, 1, 1).is_nilpotent(&f3));
        let a = Mat2::new(Gf(1), Gf(1), Gf(2), Gf(2));
        assert!(a.is_nilpotent(&f3));
        assert!(a.mul(&a, &f3).is_zero(&f3));
        assert!(a.to_matn().is_nilpotent(&f3));
    }

    #[test]
    fn nilpotent_counts() {
        assert_eq!(enumerate_nilpotent(&f(2), 2).unwrap().len(), 4);
        assert_eq!(enumerate_nilpotent(&f(3), 2).unwrap().len(), 9);
        assert_eq!(enumerate_nilpotent(&f(2), 3).unwrap().len(), 64);
        assert!(matches!(enumerate_nilpotent(&f(2), 4), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn gl_counts() {
        assert_eq!(enumerate_gl(&f(2), 2).unwrap().len(), 6);
        assert_eq!(enumerate_gl(&f(3), 2).unwrap().len(), 48);
        assert_eq!(enumerate_gl(&f(2), 3).unwrap().len(), 168);
        assert_eq!(gl_order(3, 3), 11232);
    }

    #[test]
    fn nilpotent_criteria_agree_on_all_2x2() {
        for fld in [f(2), f(3), GaloisField::new(2, 2).unwrap()] {
            let all = scan_all(&fld, 2, |_| true);
            for m in all {
                let m2 = m.to_mat2().unwrap();
                assert_eq!(m.is_nilpotent(&fld), m2.is_nilpotent(&fld));
            }
        }
    }

    #[test]
    fn nilpotent_enumeration_order_matches_filtering() {
        let fld = f(3);
        let filtered = scan_all(&fld, 2, |m| m.is_nilpotent(&fld));
        let direct: Vec<_> = enumerate_nilpotent2(&fld).iter().map(Mat2::to_matn).collect();
        assert_eq!(filtered, direct);
    }

    #[test]
    fn conjugation_examples() {
        let f2 = f(2);
        let e21 = Mat2::e21(&f2).to_matn();
        let swap = MatN::from_entries(2, vec![Gf(0), Gf(1), Gf(1), Gf(0)]).unwrap();
        let out = conjugate_tuple(&swap, &[e21.clone()], &f2).unwrap();
        assert_eq!(out, vec![Mat2::e12(&f2).to_matn()]);
        let id = MatN::identity(&f2, 2);
        assert_eq!(conjugate_tuple(&id, &[e21.clone()], &f2).unwrap(), vec![e21.clone()]);
        let zero = MatN::zero(&f2, 2);
        assert_eq!(conjugate_tuple(&swap, &[zero.clone(), zero.clone()], &f2).unwrap(), vec![zero.clone(), zero]);
        let singular = MatN::zero(&f2, 2);
        assert_eq!(conjugate_tuple(&singular, &[e21], &f2), Err(Error::Singular));
    }

    #[test]
    fn conjugation_composes() {
        let f3 = f(3);
        let gl = enumerate_gl(&f3, 2).unwrap();
        let nil = enumerate_nilpotent(&f3, 2).unwrap();
        let t = vec![nil[3].clone(), nil[7].clone()];
        for g in gl.iter().step_by(5) {
            for h in gl.iter().step_by(7) {
                let lhs = conjugate_tuple(g, &conjugate_tuple(h, &t, &f3).unwrap(), &f3).unwrap();
                let gh = g.mul(h, &f3).unwrap();
                assert_eq!(lhs, conjugate_tuple(&gh, &t, &f3).unwrap());
            }
        }
    }

    #[test]
    fn inverse_3x3() {
        let f3 = f(3);
        for g in enumerate_gl(&f3, 3).unwrap().iter().step_by(97) {
            let inv = g.inverse(&f3).unwrap();
            assert_eq!(g.mul(&inv, &f3).unwrap(), MatN::identity(&f3, 3));
        }
        let q = Rationals;
        let m = MatN::from_entries(2, vec![q.from_i64(1), q.from_i64(2), q.from_i64(3), q.from_i64(4)]).unwrap();
        let inv = m.inverse(&q).unwrap();
        assert_eq!(m.mul(&inv, &q).unwrap(), MatN::identity(&q, 2));
    }

    #[test]
    fn shape_errors() {
        let f2 = f(2);
        let a = MatN::identity(&f2, 2);
        let b = MatN::identity(&f2, 3);
        assert!(matches!(a.mul(&b, &f2), Err(Error::ShapeMismatch(_))));
        assert!(MatN::<Gf>::from_entries(2, vec![Gf(0); 5]).is_err());
        assert!(NilTuple::new(&f2, vec![Mat2::identity(&f2)]).is_err());
        assert_eq!(NilTuple::<Gf>::new(&f2, vec![]), Err(Error::EmptyTuple));
    }

    #[test]
    fn matrix_json() {
        let f3 = f(3);
        let a = Mat2::new(Gf(1), Gf(1), Gf(2), Gf(2)).to_matn();
        let j = matrix_to_json(&a, &f3);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"field":"q=3","n":2,"entries":[1,1,2,2]}"#);
        assert_eq!(matrix_from_json(&j, &f3).unwrap(), a);
        assert_eq!(matrix_from_json(&j, &f(5)), Err(Error::FieldMismatch));
    }
}
